use std::io::{Read, Write};

use crate::error::{domain, Error, Result};
use crate::hyperbolic::Chart;

/// A rectangle in a Fermi or polar chart with a height field on its nodes.
///
/// The first coordinate is the "radial" one (`t` or `ρ`), along which the
/// metric coefficient varies; the second is lateral (`x` or `θ`). Nodes are
/// stored row-major with the lateral index varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartGrid {
    chart: Chart,
    radial_range: (f64, f64),
    lateral_range: (f64, f64),
    n_radial: usize,
    n_lateral: usize,
    u: Vec<f64>,
}

impl ChartGrid {
    pub fn new(
        chart: Chart,
        radial_range: (f64, f64),
        lateral_range: (f64, f64),
        n_radial: usize,
        n_lateral: usize,
    ) -> Result<Self> {
        if n_radial < 3 || n_lateral < 3 {
            return Err(domain(format!(
                "grid needs at least 3 nodes per direction, got {n_radial}x{n_lateral}"
            )));
        }
        for (name, (lo, hi)) in [("radial", radial_range), ("lateral", lateral_range)] {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(domain(format!("{name} range must be increasing, got [{lo}, {hi}]")));
            }
        }
        if chart == Chart::Polar && radial_range.0 <= 0.0 {
            return Err(domain(format!(
                "polar grids must stay off the centre: inner radius {} <= 0",
                radial_range.0
            )));
        }
        Ok(Self {
            chart,
            radial_range,
            lateral_range,
            n_radial,
            n_lateral,
            u: vec![0.0; n_radial * n_lateral],
        })
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn n_radial(&self) -> usize {
        self.n_radial
    }

    pub fn n_lateral(&self) -> usize {
        self.n_lateral
    }

    pub fn radial_range(&self) -> (f64, f64) {
        self.radial_range
    }

    pub fn lateral_range(&self) -> (f64, f64) {
        self.lateral_range
    }

    /// `(radial spacing, lateral spacing)`.
    pub fn spacing(&self) -> (f64, f64) {
        (
            (self.radial_range.1 - self.radial_range.0) / (self.n_radial - 1) as f64,
            (self.lateral_range.1 - self.lateral_range.0) / (self.n_lateral - 1) as f64,
        )
    }

    pub fn radial(&self, i: usize) -> f64 {
        if i == self.n_radial - 1 {
            return self.radial_range.1;
        }
        self.radial_range.0 + i as f64 * self.spacing().0
    }

    pub fn lateral(&self, j: usize) -> f64 {
        if j == self.n_lateral - 1 {
            return self.lateral_range.1;
        }
        self.lateral_range.0 + j as f64 * self.spacing().1
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_lateral + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.u[self.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let k = self.index(i, j);
        self.u[k] = value;
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.u
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.n_radial - 1 || j == self.n_lateral - 1
    }

    /// Sets Dirichlet data `f(radial, lateral)` on every boundary node.
    pub fn set_boundary<F: Fn(f64, f64) -> f64>(&mut self, f: F) -> Result<()> {
        for i in 0..self.n_radial {
            for j in 0..self.n_lateral {
                if self.is_boundary(i, j) {
                    let v = f(self.radial(i), self.lateral(j));
                    if !v.is_finite() {
                        return Err(domain(format!(
                            "boundary data must be finite, got {v} at ({}, {})",
                            self.radial(i),
                            self.lateral(j)
                        )));
                    }
                    self.set(i, j, v);
                }
            }
        }
        Ok(())
    }

    /// Sets every interior node to `value`, leaving boundary data untouched.
    pub fn fill_interior(&mut self, value: f64) {
        for i in 1..self.n_radial - 1 {
            for j in 1..self.n_lateral - 1 {
                self.set(i, j, value);
            }
        }
    }

    pub fn max_u(&self) -> f64 {
        self.u.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_u(&self) -> f64 {
        self.u.iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn coordinate_names(&self) -> [&'static str; 2] {
        match self.chart {
            Chart::Fermi => ["t", "x"],
            Chart::Polar => ["rho", "theta"],
        }
    }

    /// Writes `radial, lateral, u` rows with a header naming the chart coordinates.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let [a, b] = self.coordinate_names();
        let mut csv = csv::Writer::from_writer(writer);
        csv.write_record([a, b, "u"])?;
        for i in 0..self.n_radial {
            for j in 0..self.n_lateral {
                csv.write_record([
                    self.radial(i).to_string(),
                    self.lateral(j).to_string(),
                    self.get(i, j).to_string(),
                ])?;
            }
        }
        csv.flush()?;
        Ok(())
    }

    /// Writes the field at Poincaré-disk positions: `x_disk, y_disk, u`.
    pub fn write_disk_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        csv.write_record(["x_disk", "y_disk", "u"])?;
        for i in 0..self.n_radial {
            for j in 0..self.n_lateral {
                let (x, y) = self.chart.to_disk(self.radial(i), self.lateral(j))?;
                csv.write_record([x.to_string(), y.to_string(), self.get(i, j).to_string()])?;
            }
        }
        csv.flush()?;
        Ok(())
    }
}

/// Converts a chart CSV written by [`ChartGrid::write_csv`] to disk
/// coordinates. The chart is read off the header. Returns the row count.
pub fn export_disk<R: Read, W: Write>(input: R, output: W) -> Result<usize> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.clone();
    let names: Vec<&str> = headers.iter().map(str::trim).collect();
    let chart = match names.as_slice() {
        ["t", "x", "u"] => Chart::Fermi,
        ["rho", "theta", "u"] => Chart::Polar,
        _ => {
            return Err(Error::Config(format!(
                "expected a `t,x,u` or `rho,theta,u` header, got `{}`",
                names.join(",")
            )))
        }
    };
    let mut out = csv::Writer::from_writer(output);
    out.write_record(["x_disk", "y_disk", "u"])?;
    let mut rows = 0;
    for record in reader.records() {
        let record = record?;
        let mut vals = [0.0; 3];
        for (k, v) in vals.iter_mut().enumerate() {
            let field = record.get(k).unwrap_or("");
            *v = field.trim().parse().map_err(|_| {
                Error::Config(format!("row {}: cannot parse `{field}` as a number", rows + 1))
            })?;
        }
        let (x, y) = chart.to_disk(vals[0], vals[1])?;
        out.write_record([x.to_string(), y.to_string(), vals[2].to_string()])?;
        rows += 1;
    }
    out.flush()?;
    Ok(rows)
}
