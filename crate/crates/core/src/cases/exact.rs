use std::f64::consts::PI;
use std::str::FromStr;

use crate::field::ScalarField;
use crate::{HhoError, Point, Result, Tensor};

/// Manufactured solutions with closed-form derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExactSolution {
    /// `cos(pi x) cos(pi y)`.
    Cosine,
    /// `sum_{i+j<=d} x^i y^j / (1 + i + 2j)`.
    Polynomial { degree: usize },
}

impl FromStr for ExactSolution {
    type Err = HhoError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "cosine" || s == "cos" {
            return Ok(ExactSolution::Cosine);
        }
        let deg = s
            .strip_prefix("poly")
            .or_else(|| s.strip_prefix("polynomial"))
            .map(|d| d.trim_start_matches(['-', ':', '_']))
            .and_then(|d| d.parse::<usize>().ok());
        match deg {
            Some(degree) if degree <= 12 => Ok(ExactSolution::Polynomial { degree }),
            _ => Err(HhoError::Config(format!(
                "unknown exact solution '{s}' (cosine | polyN)"
            ))),
        }
    }
}

impl std::fmt::Display for ExactSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExactSolution::Cosine => write!(f, "cosine"),
            ExactSolution::Polynomial { degree } => write!(f, "poly{degree}"),
        }
    }
}

fn poly_terms(d: usize) -> impl Iterator<Item = (i32, i32, f64)> {
    (0..=d).flat_map(move |s| {
        (0..=s).map(move |j| ((s - j) as i32, j as i32, 1.0 / (1 + s + j) as f64))
    })
}

fn pw(x: f64, n: i32) -> f64 {
    if n < 0 {
        0.0
    } else {
        x.powi(n)
    }
}

impl ExactSolution {
    pub fn value(&self, x: &Point) -> f64 {
        match *self {
            ExactSolution::Cosine => (PI * x.x).cos() * (PI * x.y).cos(),
            ExactSolution::Polynomial { degree } => poly_terms(degree)
                .map(|(i, j, c)| c * pw(x.x, i) * pw(x.y, j))
                .sum(),
        }
    }

    pub fn grad(&self, x: &Point) -> Point {
        match *self {
            ExactSolution::Cosine => {
                let (s, c) = ((PI * x.x).sin(), (PI * x.x).cos());
                let (t, d) = ((PI * x.y).sin(), (PI * x.y).cos());
                Point::new(-PI * s * d, -PI * c * t)
            }
            ExactSolution::Polynomial { degree } => {
                poly_terms(degree).fold(Point::zeros(), |g, (i, j, c)| {
                    g + Point::new(
                        c * i as f64 * pw(x.x, i - 1) * pw(x.y, j),
                        c * j as f64 * pw(x.x, i) * pw(x.y, j - 1),
                    )
                })
            }
        }
    }

    /// Second derivatives `[[u_xx, u_xy], [u_xy, u_yy]]`.
    pub fn hessian(&self, x: &Point) -> Tensor {
        match *self {
            ExactSolution::Cosine => {
                let u = self.value(x);
                let m = PI * PI * (PI * x.x).sin() * (PI * x.y).sin();
                Tensor::new(-PI * PI * u, m, m, -PI * PI * u)
            }
            ExactSolution::Polynomial { degree } => {
                poly_terms(degree).fold(Tensor::zeros(), |h, (i, j, c)| {
                    let (fi, fj) = (i as f64, j as f64);
                    let xx = c * fi * (fi - 1.0) * pw(x.x, i - 2) * pw(x.y, j);
                    let xy = c * fi * fj * pw(x.x, i - 1) * pw(x.y, j - 1);
                    let yy = c * fj * (fj - 1.0) * pw(x.x, i) * pw(x.y, j - 2);
                    h + Tensor::new(xx, xy, xy, yy)
                })
            }
        }
    }

    /// `-div(K grad u)` for a constant tensor `K`.
    pub fn source(&self, k: &Tensor, x: &Point) -> f64 {
        -(k.component_mul(&self.hessian(x))).sum()
    }
}

impl ScalarField for ExactSolution {
    fn value(&self, x: &Point) -> f64 {
        ExactSolution::value(self, x)
    }

    fn grad(&self, x: &Point) -> Point {
        ExactSolution::grad(self, x)
    }
}
