//! Machine-readable result containers and writers (CSV for grids, JSON for
//! benchmark records).

use std::io::Write;
use std::path::Path;

use serde::Serialize;

/// One evaluated grid point with its normalized error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridPoint {
    pub x: f64,
    pub y: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    pub e_rel: f64,
}

/// Per-point relative errors, normalized by the maximum field magnitude
/// over the grid.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorGrid {
    pub scheme: String,
    pub n: usize,
    pub mode: String,
    pub rho_eps: f64,
    pub curve: String,
    pub points: Vec<GridPoint>,
}

impl ErrorGrid {
    pub fn max_err(&self) -> f64 {
        self.points.iter().map(|p| p.e_rel).fold(0.0, f64::max)
    }

    /// Largest error among points whose distance field exceeds `min_dist`
    /// (distances are carried by the caller through a parallel array).
    pub fn max_err_where<F: Fn(&GridPoint) -> bool>(&self, keep: F) -> f64 {
        self.points
            .iter()
            .filter(|p| keep(p))
            .map(|p| p.e_rel)
            .fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let has_z = self.points.iter().any(|p| p.z.is_some());
        if has_z {
            writeln!(w, "x,y,z,E_rel")?;
        } else {
            writeln!(w, "x,y,E_rel")?;
        }
        for p in &self.points {
            match p.z {
                Some(z) => writeln!(w, "{},{},{},{:e}", p.x, p.y, z, p.e_rel)?,
                None => writeln!(w, "{},{},{:e}", p.x, p.y, p.e_rel)?,
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path, format: &str) -> std::io::Result<()> {
        let file = std::fs::File::create(path)?;
        match format {
            "json" => serde_json::to_writer_pretty(file, self).map_err(std::io::Error::other),
            _ => self.write_csv(std::io::BufWriter::new(file)),
        }
    }
}

/// One benchmark configuration and its outcome.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    /// Target distance from the curve.
    pub d: f64,
    /// Panelization tolerance.
    pub eps_panel: f64,
    pub scheme: String,
    pub n_eval: u64,
    pub t_eval_s: f64,
    /// Weight-building time (SSQ) or interpolation time (adaptive).
    pub t_weights_s: f64,
    pub max_rel_err: f64,
    pub targets: usize,
    pub seed: u64,
}

pub fn save_bench(records: &[BenchRecord], path: &Path) -> std::io::Result<()> {
    let file = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(file, records).map_err(std::io::Error::other)
}
