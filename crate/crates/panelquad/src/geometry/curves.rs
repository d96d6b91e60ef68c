//! Concrete curves used by the demos and tests.

use num_complex::Complex64;

use super::panel2::Curve2;
use super::panel3::Curve3;
use super::vec3::V3;

type C64 = Complex64;

/// The straight segment `gamma(t) = t` on `[-1,1]`.
pub struct Line2;

impl Curve2 for Line2 {
    fn eval(&self, t: f64) -> C64 {
        C64::new(t, 0.0)
    }
    fn deriv(&self, _t: f64) -> C64 {
        C64::new(1.0, 0.0)
    }
    fn domain(&self) -> (f64, f64) {
        (-1.0, 1.0)
    }
}

/// Unit circle `gamma(t) = e^{it}`.
pub struct Circle2;

impl Curve2 for Circle2 {
    fn eval(&self, t: f64) -> C64 {
        C64::new(0.0, t).exp()
    }
    fn deriv(&self, t: f64) -> C64 {
        C64::new(0.0, 1.0) * C64::new(0.0, t).exp()
    }
    fn domain(&self) -> (f64, f64) {
        (0.0, std::f64::consts::TAU)
    }
    fn closed(&self) -> bool {
        true
    }
}

/// Parabolic panel `gamma(t) = t + i k t^2` on `[-1,1]`.
pub struct Parabola {
    pub k: f64,
}

impl Parabola {
    /// Analytic continuation of the map to complex arguments.
    pub fn eval_complex(&self, t: C64) -> C64 {
        t + C64::new(0.0, self.k) * t * t
    }
}

impl Curve2 for Parabola {
    fn eval(&self, t: f64) -> C64 {
        C64::new(t, self.k * t * t)
    }
    fn deriv(&self, t: f64) -> C64 {
        C64::new(1.0, 2.0 * self.k * t)
    }
    fn domain(&self) -> (f64, f64) {
        (-1.0, 1.0)
    }
}

/// Starfish boundary `gamma(t) = (1 + 0.3 cos 5t) e^{it}` on `[0, 2pi)`.
pub struct Starfish;

impl Starfish {
    pub const AMPL: f64 = 0.3;
    pub const ARMS: f64 = 5.0;

    /// Analytic continuation of the map to complex parameters; used to
    /// place near-boundary evaluation grids at controlled distances.
    pub fn eval_complex(&self, t: C64) -> C64 {
        let r = C64::new(1.0, 0.0) + Self::AMPL * (Self::ARMS * t).cos();
        r * (C64::new(0.0, 1.0) * t).exp()
    }

    pub fn deriv_complex(&self, t: C64) -> C64 {
        let i = C64::new(0.0, 1.0);
        let r = C64::new(1.0, 0.0) + Self::AMPL * (Self::ARMS * t).cos();
        let dr = -Self::AMPL * Self::ARMS * (Self::ARMS * t).sin();
        (dr + i * r) * (i * t).exp()
    }

    /// Interior test by comparing the radius against the boundary radius at
    /// the same angle.
    pub fn contains(&self, z: C64) -> bool {
        let r = z.norm();
        let th = z.im.atan2(z.re);
        r < 1.0 + Self::AMPL * (Self::ARMS * th).cos()
    }
}

impl Curve2 for Starfish {
    fn eval(&self, t: f64) -> C64 {
        self.eval_complex(C64::new(t, 0.0))
    }
    fn deriv(&self, t: f64) -> C64 {
        self.deriv_complex(C64::new(t, 0.0))
    }
    fn domain(&self) -> (f64, f64) {
        (0.0, std::f64::consts::TAU)
    }
    fn closed(&self) -> bool {
        true
    }
}

/// The straight space line `g(t) = (t, 0, 0)`.
pub struct Line3;

impl Curve3 for Line3 {
    fn eval(&self, t: f64) -> V3 {
        [t, 0.0, 0.0]
    }
    fn deriv(&self, _t: f64) -> V3 {
        [1.0, 0.0, 0.0]
    }
    fn domain(&self) -> (f64, f64) {
        (-1.0, 1.0)
    }
}

/// Closed random-Fourier space curve ("squiggle") on `[0,1)`:
///
/// `g(t) = Re sum_{k=-20}^{20} c_k / (5 + |k|) e^{2 pi i k t}`
///
/// with a fixed table of complex coefficients, committed below so that runs
/// are reproducible bit for bit.
pub struct Squiggle3;

impl Squiggle3 {
    fn series(&self, t: f64) -> (V3, V3) {
        let tau = std::f64::consts::TAU;
        let mut g = [0.0; 3];
        let mut dg = [0.0; 3];
        for (idx, cs) in SQUIGGLE_COEF.iter().enumerate() {
            let k = idx as f64 - 20.0;
            let decay = 1.0 / (5.0 + k.abs());
            let phase = C64::new(0.0, tau * k * t).exp();
            let dphase = phase * C64::new(0.0, tau * k);
            for c in 0..3 {
                g[c] += (cs[c] * decay * phase).re;
                dg[c] += (cs[c] * decay * dphase).re;
            }
        }
        (g, dg)
    }
}

impl Curve3 for Squiggle3 {
    fn eval(&self, t: f64) -> V3 {
        self.series(t).0
    }
    fn deriv(&self, t: f64) -> V3 {
        self.series(t).1
    }
    fn domain(&self) -> (f64, f64) {
        (0.0, 1.0)
    }
    fn closed(&self) -> bool {
        true
    }
}

/// Fixed coefficient table for [`Squiggle3`], modes k = -20..=20.
#[rustfmt::skip]
static SQUIGGLE_COEF: [[C64; 3]; 41] = [
    [C64::new(-1.10978116669885551e+00, 4.64818856714691475e-01), C64::new(7.35869120119667985e-01, 1.23844965953676933e+00), C64::new(-1.56084114564122522e-01, 8.14064117659351161e-01)],
    [C64::new(-1.12852247691147012e+00, -7.46724326711246889e-01), C64::new(-1.60477745364389479e+00, -3.09720031720729760e-01), C64::new(-6.94434476871334389e-02, -1.60760793425933551e-01)],
    [C64::new(-6.04638764302721676e-01, 1.50480295962284583e+00), C64::new(-7.29672383141692804e-01, 1.13627615350563915e+00), C64::new(3.85505858680054603e-01, -1.52736537869613831e+00)],
    [C64::new(3.12301837522095893e-01, 1.61909495800048342e+00), C64::new(8.90618271495292602e-01, -1.35524620397824713e+00), C64::new(-4.30174134501907446e-01, 1.03803413619322460e+00)],
    [C64::new(-1.70818181965247895e+00, 1.46216764173678848e-01), C64::new(1.53378089268943740e+00, 1.68876280555422165e+00), C64::new(2.05109073388334943e-02, -7.09254730613052442e-01)],
    [C64::new(-2.00626393285342597e-01, 6.95115623685991557e-01), C64::new(6.19160632635290420e-01, 3.24905063780229986e-01), C64::new(-1.49333568628861113e+00, 2.22264959334269624e-01)],
    [C64::new(9.32370443595927245e-01, -1.68703152970716763e+00), C64::new(4.90366415107766240e-01, -1.67578872850622695e+00), C64::new(-5.02480003970424027e-01, -1.20013710577613208e+00)],
    [C64::new(7.26718249739697120e-01, -7.88207133721457009e-01), C64::new(-2.30492555336142185e-01, -2.46152739894606759e-01), C64::new(5.42481748164703848e-01, 1.57196544339317429e-01)],
    [C64::new(-1.37469559891937743e+00, -3.80690985308412666e-01), C64::new(-7.83566746387169277e-01, 3.40003794816693794e-01), C64::new(-1.08528734027184681e+00, 5.37308517268659580e-01)],
    [C64::new(7.30411253822629170e-01, 2.57202581002875919e+00), C64::new(-6.87840016269906429e-01, 3.09877985115977028e-01), C64::new(3.81066108159419381e-01, -1.99663031572172550e-01)],
    [C64::new(3.98387780862158106e-02, 8.39944713916697228e-01), C64::new(-3.11210037971871634e-01, -2.30543081183545207e+00), C64::new(8.73021394437953902e-01, 1.62726199784348186e-01)],
    [C64::new(1.03072523484092216e+00, 5.00892609989856741e-01), C64::new(7.75155007240482391e-02, 6.30569381094957304e-01), C64::new(-2.27973668808484708e+00, -1.23722242277465710e+00)],
    [C64::new(-1.58496404940622865e-01, -1.37494196589267692e+00), C64::new(-1.39355561847520515e-01, -1.58501860462272059e+00), C64::new(7.77218603170692024e-01, 3.67469114435802699e-02)],
    [C64::new(6.96276192781083769e-01, -5.36333472933203215e-01), C64::new(-1.16133475622277205e+00, 4.98991311152250483e-01), C64::new(2.28072770731795993e+00, 5.56005672857102895e-01)],
    [C64::new(-5.37023794878576433e-01, 6.83161894779900969e-01), C64::new(4.03871967320992953e-01, -1.05534666973613933e+00), C64::new(-6.55197797374215019e-01, -5.80498370829392929e-01)],
    [C64::new(2.30442736826519834e-01, -1.82493112702597549e-01), C64::new(1.15905547793750863e+00, -1.67533537827106827e+00), C64::new(1.51964536102803183e+00, 6.01737904795984838e-02)],
    [C64::new(1.05977178508969305e+00, -2.80386878671758655e-01), C64::new(3.01173211800991947e+00, 1.56271607030899262e-01), C64::new(-1.19003840745553341e-01, -1.76956908354927345e+00)],
    [C64::new(2.00921506131696292e-01, 5.52468613292917854e-01), C64::new(-1.68349031506601987e+00, -7.86088956503683267e-01), C64::new(-6.17650874340474609e-01, -6.53506036921105316e-01)],
    [C64::new(7.13522169786771743e-01, 5.07380882718115989e-01), C64::new(-6.81031134333533128e-01, 5.71356712367089153e-02), C64::new(-9.76029130309626236e-01, 1.31395831453206346e+00)],
    [C64::new(5.91155772630902326e-02, 9.32735612929757263e-01), C64::new(4.40786851774544131e-01, -6.90714404808848159e-02), C64::new(3.76502069695976271e-01, -1.09850043515539686e+00)],
    [C64::new(3.50638887186754044e-03, -6.64294527251270805e-01), C64::new(3.37528329975104679e-01, -1.19154373156517490e+00), C64::new(1.32684942474006395e+00, 5.11828256152345659e-02)],
    [C64::new(1.75439760818448542e+00, 1.30548646570045856e+00), C64::new(-6.79135541919906105e-01, 8.77034515482453703e-01), C64::new(7.15937625915099241e-01, -9.02866292235793011e-02)],
    [C64::new(6.44338177030109871e-01, 2.42584989437019471e+00), C64::new(-1.84187246908982338e+00, 3.17622979492921342e-01), C64::new(1.25178872100921734e+00, -7.83716414240739567e-01)],
    [C64::new(7.20433129771794634e-01, -1.46458298135926124e+00), C64::new(-5.10773993860877962e-01, 5.09789943227929143e-01), C64::new(-6.57322090706639384e-01, -1.37757702081355382e+00)],
    [C64::new(1.20868025186989603e+00, -1.92784587408502461e-01), C64::new(-1.56883824148118328e-01, -1.49489887211478245e+00), C64::new(-5.85883929357290612e-01, 8.86206076890753924e-01)],
    [C64::new(-1.51360358442795118e+00, -1.71363378769376218e+00), C64::new(-1.37057152334664756e+00, 9.39551490261978928e-01), C64::new(-2.16251235148829553e-02, 1.59548285412499435e+00)],
    [C64::new(6.25702073645779344e-01, -8.10876859682915563e-01), C64::new(7.96456353627286950e-01, 1.39239277251781801e+00), C64::new(4.73616457568636628e-01, -8.97080222737020594e-01)],
    [C64::new(1.56963545042251429e+00, 7.87811280104229045e-02), C64::new(-5.18631684638670154e-01, 4.48604260671956412e-01), C64::new(-6.42721798124433752e-01, 6.51289061659388602e-01)],
    [C64::new(8.50669517032562467e-02, 8.02074442643737895e-02), C64::new(2.35898546317345525e-01, 1.54313528399798949e+00), C64::new(8.53709493013713017e-01, -4.07476550578174612e-01)],
    [C64::new(-1.18253325146473420e+00, -2.64944304722663038e+00), C64::new(-9.55482553480327845e-01, 1.54031992688553676e+00), C64::new(8.08438390747638347e-02, 8.13596581850120293e-01)],
    [C64::new(-2.15020681477014558e-01, 1.21317139937136576e+00), C64::new(1.26579051927060537e-01, 1.46365147703695575e-01), C64::new(-1.07865568439627268e+00, 1.49786390213831244e+00)],
    [C64::new(6.76513359373391188e-01, 6.22193658371237635e-01), C64::new(5.66284377484457035e-01, -8.53032929260380435e-01), C64::new(4.38547618467758749e-01, -4.16366576581769066e-01)],
    [C64::new(-9.86972149522313491e-01, -8.50143526427460244e-02), C64::new(8.16601376637902665e-02, -4.54636414312708070e-01), C64::new(-1.93794008542918994e+00, 2.00370345162892471e+00)],
    [C64::new(1.75790091564753004e+00, -3.88300202767557501e-01), C64::new(8.66896215752005816e-01, 1.30362468881900995e+00), C64::new(9.34083942523330379e-01, 5.76351824786416223e-01)],
    [C64::new(-3.56294377516930216e-01, -1.30548565933701699e+00), C64::new(-9.22707541127601033e-02, 4.86361687248675012e-01), C64::new(5.24340739466102934e-01, -2.32086503185123810e-05)],
    [C64::new(-1.70722572003281137e+00, 5.74663098431098196e-01), C64::new(3.20279658761848163e-01, 4.91719550733004773e-01), C64::new(1.57532458072700499e-01, -1.14668727101811863e+00)],
    [C64::new(-1.03388608658290915e+00, -3.41931330161388158e-01), C64::new(9.32516145794203499e-01, -1.53195204925719586e+00), C64::new(-7.46872019924720743e-01, 9.44199434639933832e-01)],
    [C64::new(-5.73832648678050838e-01, -9.71020645119258008e-01), C64::new(-1.25539701239438317e+00, 8.71183058205821981e-01), C64::new(-3.88856126688961024e-01, -1.03578297045421652e+00)],
    [C64::new(-2.28688702198275029e-01, 4.29179496223615231e-01), C64::new(7.02604964831855971e-01, -2.84321713970952850e-01), C64::new(1.80406468163185396e-01, 7.49015070697382379e-01)],
    [C64::new(-6.73533817010221081e-01, 6.07303274037377383e-01), C64::new(7.54258368871007501e-01, -7.97317733358050784e-01), C64::new(-5.15291622920602821e-01, -1.25924655789924622e+00)],
    [C64::new(-5.09018415061512575e-01, -6.86062840951107589e-01), C64::new(-1.24435806823367390e+00, -4.62615007870996131e-01), C64::new(2.39580192581335422e-01, 5.93314115975251632e-01)],
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squiggle_is_closed_and_regular() {
        let c = Squiggle3;
        let g0 = c.eval(0.0);
        let g1 = c.eval(1.0);
        for d in 0..3 {
            assert!((g0[d] - g1[d]).abs() < 1e-12);
        }
        let mut min_speed = f64::INFINITY;
        for i in 0..400 {
            let t = i as f64 / 400.0;
            let d = c.deriv(t);
            min_speed = min_speed.min(super::super::vec3::norm(d));
        }
        assert!(min_speed > 0.1, "curve should be regular, min |g'| = {min_speed}");
    }

    #[test]
    fn squiggle_derivative_consistent() {
        let c = Squiggle3;
        let t = 0.37;
        let eps = 1e-6;
        let num: Vec<f64> = (0..3)
            .map(|d| (c.eval(t + eps)[d] - c.eval(t - eps)[d]) / (2.0 * eps))
            .collect();
        let ana = c.deriv(t);
        for d in 0..3 {
            assert!((num[d] - ana[d]).abs() < 1e-6);
        }
    }

    #[test]
    fn starfish_complex_continuation_matches_real() {
        let s = Starfish;
        let t = 1.234;
        let a = s.eval(t);
        let b = s.eval_complex(C64::new(t, 0.0));
        assert!((a - b).norm() < 1e-15);
        // interior points map from positive imaginary parameter offsets
        let inside = s.eval_complex(C64::new(t, 0.05));
        assert!(s.contains(inside));
    }
}
