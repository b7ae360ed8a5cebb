//! Numerical checks of explicit contact forms.
//!
//! Collar model: on `[0,1]_t × [b,c]_s × S¹_φ` the form
//! `α = k dt + e^s (dφ + f_t(s)² ∂_s g_t(s) ds)` has
//! `α ∧ dα = e^s (k + ∂_t B) dt∧ds∧dφ` with `B = e^s f² ∂_s g`.
//! `dt∧ds∧dφ` is taken as the positive orientation.
//!
//! `(f_t(s), g_t(s))` are polar coordinates of a straight-line homotopy from a
//! loop point `γ(t)` to a basepoint `x`. Internally `f² ∂_s g` is evaluated as
//! `p × ∂_s p` on Cartesian samples `p = f (cos g, sin g)`, which agrees with
//! the polar expression and is smooth through the origin.
//!
//! Binding model: `h₁(r) dφ + h₂(r) dθ` is contact where
//! `h₁ h₂' - h₂ h₁' > 0`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Margin floor in the strict-positivity policy.
pub const MARGIN_FLOOR: f64 = 1e-6;
/// Margin is this multiple of the finite-difference error estimate.
pub const MARGIN_ERROR_FACTOR: f64 = 3.0;
/// Closed-form and finite-difference coefficients must agree to this
/// multiple of the Richardson error estimate.
pub const AGREEMENT_FACTOR: f64 = 10.0;
pub const MIN_SAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContactError {
    #[error("grid needs at least {MIN_SAMPLES} samples per axis, got {0}x{1}")]
    GridTooSmall(usize, usize),
    #[error("unsupported finite-difference order {0} (only 2)")]
    UnsupportedScheme(u8),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("sampled profile is {profile_t}x{profile_s} but grid asks for {grid_t}x{grid_s}")]
    GridMismatch { profile_t: usize, profile_s: usize, grid_t: usize, grid_s: usize },
    #[error(
        "grid too coarse: closed-form and finite-difference contact coefficients differ by {disagreement:e} \
         (tolerance {tolerance:e}) at t={t:.4}, s={s:.4}"
    )]
    GridTooCoarse { disagreement: f64, tolerance: f64, t: f64, s: f64 },
}

pub type Result<T> = std::result::Result<T, ContactError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t_samples: usize,
    pub s_samples: usize,
    #[serde(default = "default_order")]
    pub scheme_order: u8,
}

fn default_order() -> u8 {
    2
}

impl GridSpec {
    pub fn new(t_samples: usize, s_samples: usize) -> Result<Self> {
        let g = GridSpec { t_samples, s_samples, scheme_order: 2 };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_samples < MIN_SAMPLES || self.s_samples < MIN_SAMPLES {
            return Err(ContactError::GridTooSmall(self.t_samples, self.s_samples));
        }
        if self.scheme_order != 2 {
            return Err(ContactError::UnsupportedScheme(self.scheme_order));
        }
        Ok(())
    }

    /// Halves both spacings; the old nodes stay nodes.
    pub fn refined(&self) -> GridSpec {
        GridSpec { t_samples: 2 * self.t_samples - 1, s_samples: 2 * self.s_samples - 1, scheme_order: self.scheme_order }
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { t_samples: 65, s_samples: 65, scheme_order: 2 }
    }
}

/// Row-major samples over `t` (rows) × `s` (columns).
#[derive(Debug, Clone, PartialEq)]
struct Grid2 {
    nt: usize,
    ns: usize,
    data: Vec<f64>,
}

impl Grid2 {
    fn from_fn(nt: usize, ns: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(nt * ns);
        for i in 0..nt {
            for j in 0..ns {
                data.push(f(i, j));
            }
        }
        Grid2 { nt, ns, data }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.ns + j]
    }

    fn d_t(&self, h: f64, stride: usize) -> Grid2 {
        let mut out = vec![0.0; self.data.len()];
        for j in 0..self.ns {
            let column: Vec<f64> = (0..self.nt).map(|i| self.at(i, j)).collect();
            for (i, d) in derivative(&column, h, stride).into_iter().enumerate() {
                out[i * self.ns + j] = d;
            }
        }
        Grid2 { nt: self.nt, ns: self.ns, data: out }
    }

    fn d_s(&self, h: f64, stride: usize) -> Grid2 {
        let mut out = Vec::with_capacity(self.data.len());
        for i in 0..self.nt {
            out.extend(derivative(&self.data[i * self.ns..(i + 1) * self.ns], h, stride));
        }
        Grid2 { nt: self.nt, ns: self.ns, data: out }
    }

    /// Minimum and its index, first occurrence in row-major order.
    fn argmin(&self) -> (f64, usize, usize) {
        let mut best = (f64::INFINITY, 0, 0);
        for i in 0..self.nt {
            for j in 0..self.ns {
                let v = self.at(i, j);
                if v < best.0 {
                    best = (v, i, j);
                }
            }
        }
        best
    }
}

/// Second-order first derivative with step `stride·h`: central inside,
/// one-sided three-point stencils at the ends. Needs `values.len() > 2·stride`.
pub fn derivative(values: &[f64], h: f64, stride: usize) -> Vec<f64> {
    let n = values.len();
    assert!(n > 2 * stride, "need more than {} samples", 2 * stride);
    let step = h * stride as f64;
    (0..n)
        .map(|i| {
            if i >= stride && i + stride < n {
                (values[i + stride] - values[i - stride]) / (2.0 * step)
            } else if i < stride {
                (4.0 * (values[i + stride] - values[i]) - (values[i + 2 * stride] - values[i])) / (2.0 * step)
            } else {
                (4.0 * (values[i] - values[i - stride]) - (values[i] - values[i - 2 * stride])) / (2.0 * step)
            }
        })
        .collect()
}

/// Base loop `γ: [0,1] → int D²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LoopShape {
    Constant { point: [f64; 2] },
    /// `γ(t) = start + t·velocity`.
    Linear { start: [f64; 2], velocity: [f64; 2] },
    /// `γ(t) = center + radius (cos 2πnt, sin 2πnt)` with `n` turns.
    Circle {
        center: [f64; 2],
        radius: f64,
        #[serde(default = "one_turn")]
        turns: u32,
    },
}

impl LoopShape {
    fn point(&self, t: f64) -> [f64; 2] {
        match *self {
            LoopShape::Constant { point } => point,
            LoopShape::Linear { start, velocity } => [start[0] + t * velocity[0], start[1] + t * velocity[1]],
            LoopShape::Circle { center, radius, turns } => {
                let a = 2.0 * PI * f64::from(turns) * t;
                [center[0] + radius * a.cos(), center[1] + radius * a.sin()]
            }
        }
    }

    fn velocity(&self, t: f64) -> [f64; 2] {
        match *self {
            LoopShape::Constant { .. } => [0.0, 0.0],
            LoopShape::Linear { velocity, .. } => velocity,
            LoopShape::Circle { radius, turns, .. } => {
                let w = 2.0 * PI * f64::from(turns);
                let a = w * t;
                [-w * radius * a.sin(), w * radius * a.cos()]
            }
        }
    }
}

fn one_turn() -> u32 {
    1
}

fn cross(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

/// Straight-line homotopy `p(t,s) = (1-λ(s)) γ(t) + λ(s) x` on `[b, c]`,
/// with `λ` a C³ step from 0 at `b` to 1 at `c - flat·(c-b)`, constant after.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollarFamily {
    pub base_loop: LoopShape,
    pub basepoint: [f64; 2],
    pub s_min: f64,
    pub s_max: f64,
    pub flat_fraction: f64,
}

impl CollarFamily {
    pub fn constant() -> Self {
        CollarFamily {
            base_loop: LoopShape::Constant { point: [0.3, 0.4] },
            basepoint: [0.0, -0.3],
            s_min: -1.0,
            s_max: 0.0,
            flat_fraction: 0.2,
        }
    }

    /// Linear drift whose `∂_t B = -0.2 e^s λ'(s) ≤ 0`.
    pub fn drift() -> Self {
        CollarFamily {
            base_loop: LoopShape::Linear { start: [0.3, -0.2], velocity: [0.0, 0.4] },
            basepoint: [0.5, 0.0],
            s_min: -1.0,
            s_max: 0.0,
            flat_fraction: 0.2,
        }
    }

    /// Circle of radius 0.5 centred 0.6 above the basepoint.
    pub fn circle() -> Self {
        CollarFamily {
            base_loop: LoopShape::Circle { center: [0.0, 0.3], radius: 0.5, turns: 1 },
            basepoint: [0.0, -0.3],
            s_min: -1.0,
            s_max: 0.0,
            flat_fraction: 0.2,
        }
    }

    pub fn named(name: &str) -> Option<Self> {
        match name {
            "constant" => Some(Self::constant()),
            "drift" => Some(Self::drift()),
            "circle" => Some(Self::circle()),
            _ => None,
        }
    }

    pub const NAMES: [&'static str; 3] = ["constant", "drift", "circle"];

    /// Same family with `c - b = length`, keeping `c`.
    pub fn with_length(mut self, length: f64) -> Self {
        self.s_min = self.s_max - length;
        self
    }

    fn ramp_length(&self) -> f64 {
        (self.s_max - self.s_min) * (1.0 - self.flat_fraction)
    }

    pub fn lambda(&self, s: f64) -> f64 {
        let u = ((s - self.s_min) / self.ramp_length()).clamp(0.0, 1.0);
        u.powi(4) * (35.0 - 84.0 * u + 70.0 * u * u - 20.0 * u.powi(3))
    }

    pub fn lambda_prime(&self, s: f64) -> f64 {
        let u = (s - self.s_min) / self.ramp_length();
        if !(0.0..=1.0).contains(&u) {
            return 0.0;
        }
        140.0 * u.powi(3) * (1.0 - u).powi(3) / self.ramp_length()
    }

    pub fn point(&self, t: f64, s: f64) -> [f64; 2] {
        let l = self.lambda(s);
        let g = self.base_loop.point(t);
        [(1.0 - l) * g[0] + l * self.basepoint[0], (1.0 - l) * g[1] + l * self.basepoint[1]]
    }

    /// Exact `∂_t B = e^s λ'(s) (γ'(t) × x)`.
    pub fn exact_dt_b(&self, t: f64, s: f64) -> f64 {
        s.exp() * self.lambda_prime(s) * cross(self.base_loop.velocity(t), self.basepoint)
    }

    pub fn sample(&self, grid: &GridSpec) -> Result<CollarProfile> {
        grid.validate()?;
        let ts = linspace(0.0, 1.0, grid.t_samples);
        let ss = linspace(self.s_min, self.s_max, grid.s_samples);
        let radius = (0..grid.t_samples)
            .map(|i| (0..grid.s_samples).map(|j| norm(self.point(ts[i], ss[j]))).collect())
            .collect();
        let angle = (0..grid.t_samples)
            .map(|i| {
                (0..grid.s_samples)
                    .map(|j| {
                        let p = self.point(ts[i], ss[j]);
                        p[1].atan2(p[0])
                    })
                    .collect()
            })
            .collect();
        let mut profile = CollarProfile::sampled(self.s_min, self.s_max, radius, angle)?;
        profile.exact = Some(Grid2::from_fn(grid.t_samples, grid.s_samples, |i, j| self.exact_dt_b(ts[i], ss[j])));
        Ok(profile)
    }
}

fn norm(p: [f64; 2]) -> f64 {
    p[0].hypot(p[1])
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Sampled collar data: radius and angle of the homotopy on a uniform
/// `t × s` grid over `[0,1] × [b,c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollarProfile {
    s_min: f64,
    s_max: f64,
    radius: Grid2,
    angle: Grid2,
    exact: Option<Grid2>,
}

/// Tolerance for "angle constant near c": last two s-columns agree.
const FLAT_END_TOLERANCE: f64 = 1e-9;

impl CollarProfile {
    pub fn sampled(s_min: f64, s_max: f64, radius: Vec<Vec<f64>>, angle: Vec<Vec<f64>>) -> Result<Self> {
        let invalid = |msg: String| Err(ContactError::InvalidProfile(msg));
        if !(s_min.is_finite() && s_max.is_finite() && s_min < s_max) {
            return invalid(format!("s-range [{s_min}, {s_max}] is empty"));
        }
        let nt = radius.len();
        let ns = radius.first().map_or(0, Vec::len);
        if nt < MIN_SAMPLES || ns < MIN_SAMPLES {
            return Err(ContactError::GridTooSmall(nt, ns));
        }
        if angle.len() != nt || radius.iter().chain(&angle).any(|row| row.len() != ns) {
            return invalid("radius and angle grids must share one rectangular shape".into());
        }
        let radius = Grid2 { nt, ns, data: radius.into_iter().flatten().collect() };
        let angle = Grid2 { nt, ns, data: angle.into_iter().flatten().collect() };
        if let Some(bad) = radius.data.iter().chain(&angle.data).find(|v| !v.is_finite()) {
            return invalid(format!("non-finite sample {bad}"));
        }
        if let Some(bad) = radius.data.iter().find(|&&r| !(0.0..1.0).contains(&r)) {
            return invalid(format!("radius {bad} outside [0, 1)"));
        }
        for i in 0..nt {
            let (last, prev) = (angle.at(i, ns - 1), angle.at(i, ns - 2));
            let (r_last, r_prev) = (radius.at(i, ns - 1), radius.at(i, ns - 2));
            if wrapped_difference(last, prev).abs() > FLAT_END_TOLERANCE || (r_last - r_prev).abs() > FLAT_END_TOLERANCE {
                return invalid(format!("homotopy is not constant near s = c (row {i})"));
            }
        }
        Ok(CollarProfile { s_min, s_max, radius, angle, exact: None })
    }

    pub fn t_samples(&self) -> usize {
        self.radius.nt
    }

    pub fn s_samples(&self) -> usize {
        self.radius.ns
    }

    pub fn s_range(&self) -> (f64, f64) {
        (self.s_min, self.s_max)
    }

    pub fn has_exact_derivative(&self) -> bool {
        self.exact.is_some()
    }

    fn ht(&self) -> f64 {
        1.0 / (self.t_samples() - 1) as f64
    }

    fn hs(&self) -> f64 {
        (self.s_max - self.s_min) / (self.s_samples() - 1) as f64
    }

    fn t_at(&self, i: usize) -> f64 {
        i as f64 * self.ht()
    }

    fn s_at(&self, j: usize) -> f64 {
        self.s_min + j as f64 * self.hs()
    }

    /// `B = e^s (p × ∂_s p)` with the s-derivative taken at `stride`.
    fn b_grid(&self, stride: usize) -> Grid2 {
        let (nt, ns) = (self.t_samples(), self.s_samples());
        let px = Grid2::from_fn(nt, ns, |i, j| self.radius.at(i, j) * self.angle.at(i, j).cos());
        let py = Grid2::from_fn(nt, ns, |i, j| self.radius.at(i, j) * self.angle.at(i, j).sin());
        let dpx = px.d_s(self.hs(), stride);
        let dpy = py.d_s(self.hs(), stride);
        Grid2::from_fn(nt, ns, |i, j| {
            self.s_at(j).exp() * (px.at(i, j) * dpy.at(i, j) - py.at(i, j) * dpx.at(i, j))
        })
    }

    fn dt_b(&self, stride: usize) -> Grid2 {
        self.b_grid(stride).d_t(self.ht(), stride)
    }
}

fn wrapped_difference(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    if d > PI {
        d - 2.0 * PI
    } else {
        d
    }
}

/// Either a named analytic family (sampled on demand) or fixed samples.
#[derive(Debug, Clone, PartialEq)]
pub enum CollarSource {
    Family(CollarFamily),
    Sampled(CollarProfile),
}

impl CollarSource {
    pub fn profile(&self, grid: &GridSpec) -> Result<CollarProfile> {
        grid.validate()?;
        match self {
            CollarSource::Family(f) => f.sample(grid),
            CollarSource::Sampled(p) => {
                if p.t_samples() != grid.t_samples || p.s_samples() != grid.s_samples {
                    return Err(ContactError::GridMismatch {
                        profile_t: p.t_samples(),
                        profile_s: p.s_samples(),
                        grid_t: grid.t_samples,
                        grid_s: grid.s_samples,
                    });
                }
                Ok(p.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollarReport {
    pub grid: GridSpec,
    /// Minimum of `∂_t B` over the grid.
    pub grid_min: f64,
    pub min_t: f64,
    pub min_s: f64,
    /// Richardson estimate of the finite-difference error in `∂_t B`.
    pub fd_error_estimate: f64,
    pub margin: f64,
    pub k_star: f64,
    /// Largest gap between `e^s (k + ∂_t B)` and the finite-difference
    /// `α ∧ dα` at `k = k_star`, and the tolerance it was held to.
    pub coefficient_disagreement: f64,
    pub coefficient_tolerance: f64,
    pub exact_reference: bool,
}

/// Smallest `k` (plus the safety margin) making the collar form contact on
/// the grid.
pub fn collar_min_k(profile: &CollarProfile, grid: &GridSpec) -> Result<CollarReport> {
    grid.validate()?;
    if profile.t_samples() != grid.t_samples || profile.s_samples() != grid.s_samples {
        return Err(ContactError::GridMismatch {
            profile_t: profile.t_samples(),
            profile_s: profile.s_samples(),
            grid_t: grid.t_samples,
            grid_s: grid.s_samples,
        });
    }
    let fine = profile.dt_b(1);
    let coarse = profile.dt_b(2);
    let fd_error_estimate = fine
        .data
        .iter()
        .zip(&coarse.data)
        .map(|(a, b)| (a - b).abs() / 3.0)
        .fold(0.0, f64::max);
    let (grid_min, i, j) = fine.argmin();
    let margin = MARGIN_FLOOR.max(MARGIN_ERROR_FACTOR * fd_error_estimate);
    let k_star = (-grid_min).max(0.0) + margin;

    let (coefficient_disagreement, coefficient_tolerance, at) = coefficient_agreement(profile, k_star);
    if coefficient_disagreement > coefficient_tolerance {
        return Err(ContactError::GridTooCoarse {
            disagreement: coefficient_disagreement,
            tolerance: coefficient_tolerance,
            t: profile.t_at(at.0),
            s: profile.s_at(at.1),
        });
    }
    Ok(CollarReport {
        grid: *grid,
        grid_min,
        min_t: profile.t_at(i),
        min_s: profile.s_at(j),
        fd_error_estimate,
        margin,
        k_star,
        coefficient_disagreement,
        coefficient_tolerance,
        exact_reference: profile.has_exact_derivative(),
    })
}

/// Finite-difference `α ∧ dα` coefficient on `dt∧ds∧dφ` from the component
/// grids `α = a dt + b ds + c dφ` (all φ-independent):
/// `a ∂_s c - b ∂_t c + c (∂_t b - ∂_s a)`.
fn wedge_coefficient(profile: &CollarProfile, k: f64, stride: usize) -> Grid2 {
    let (nt, ns) = (profile.t_samples(), profile.s_samples());
    let a = Grid2::from_fn(nt, ns, |_, _| k);
    let b = profile.b_grid(stride);
    let c = Grid2::from_fn(nt, ns, |_, j| profile.s_at(j).exp());
    let (ht, hs) = (profile.ht(), profile.hs());
    let (dc_s, dc_t) = (c.d_s(hs, stride), c.d_t(ht, stride));
    let (db_t, da_s) = (b.d_t(ht, stride), a.d_s(hs, stride));
    Grid2::from_fn(nt, ns, |i, j| {
        a.at(i, j) * dc_s.at(i, j) - b.at(i, j) * dc_t.at(i, j) + c.at(i, j) * (db_t.at(i, j) - da_s.at(i, j))
    })
}

/// Closed form `e^s (k + ∂_t B)` versus the finite-difference wedge.
/// Uses the exact `∂_t B` when the profile carries one.
fn coefficient_agreement(profile: &CollarProfile, k: f64) -> (f64, f64, (usize, usize)) {
    let numeric = wedge_coefficient(profile, k, 1);
    let numeric_coarse = wedge_coefficient(profile, k, 2);
    let fd_dt_b = profile.dt_b(1);
    let dt_b = profile.exact.as_ref().unwrap_or(&fd_dt_b);
    let mut worst = (0.0, (0, 0));
    let mut estimate: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..profile.t_samples() {
        for j in 0..profile.s_samples() {
            let closed = profile.s_at(j).exp() * (k + dt_b.at(i, j));
            let gap = (closed - numeric.at(i, j)).abs();
            if gap > worst.0 {
                worst = (gap, (i, j));
            }
            estimate = estimate.max((numeric.at(i, j) - numeric_coarse.at(i, j)).abs() / 3.0);
            scale = scale.max(closed.abs());
        }
    }
    let tolerance = AGREEMENT_FACTOR * estimate + 1e-9 * (1.0 + scale);
    (worst.0, tolerance, worst.1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositivityReport {
    pub k: f64,
    /// Minimum of `k + ∂_t B` over the grid.
    pub min_value: f64,
    pub min_t: f64,
    pub min_s: f64,
    pub passed: bool,
}

pub fn verify_form_positive(k: f64, profile: &CollarProfile, grid: &GridSpec) -> Result<PositivityReport> {
    grid.validate()?;
    let dt_b = profile.dt_b(1);
    let (min, i, j) = dt_b.argmin();
    let min_value = k + min;
    Ok(PositivityReport { k, min_value, min_t: profile.t_at(i), min_s: profile.s_at(j), passed: min_value > 0.0 })
}

/// Samples of a function of `r` on `r_i = r_max·i/n`, `i = 1..=n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadialProfile {
    pub r_max: f64,
    pub values: Vec<f64>,
}

impl RadialProfile {
    pub fn from_fn(r_max: f64, samples: usize, f: impl Fn(f64) -> f64) -> Self {
        let values = (1..=samples).map(|i| f(r_max * i as f64 / samples as f64)).collect();
        RadialProfile { r_max, values }
    }

    pub fn radii(&self) -> Vec<f64> {
        let n = self.values.len();
        (1..=n).map(|i| self.r_max * i as f64 / n as f64).collect()
    }

    fn step(&self) -> f64 {
        self.r_max / self.values.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BindingReport {
    /// Minimum of `h₁ h₂' - h₂ h₁'` and where it occurs.
    pub min_coefficient: f64,
    pub min_r: f64,
    pub coefficient_positive: bool,
    pub h1_positive: bool,
    pub h1_non_increasing: bool,
    pub h2_non_decreasing: bool,
    pub h2_quadratic_near_zero: bool,
    pub violations: Vec<String>,
    pub passed: bool,
}

/// Samples checked against `h₂ = r²` at the origin end.
const QUADRATIC_PROBES: usize = 3;
const MONOTONE_SLACK: f64 = 1e-12;

pub fn binding_check(h1: &RadialProfile, h2: &RadialProfile) -> Result<BindingReport> {
    let n = h1.values.len();
    if n < MIN_SAMPLES || h2.values.len() != n || h1.r_max != h2.r_max || h1.r_max.is_nan() || h1.r_max <= 0.0 {
        return Err(ContactError::InvalidProfile(
            "binding profiles need a shared r_max > 0 and at least 8 matching samples".into(),
        ));
    }
    let radii = h1.radii();
    let d1 = derivative(&h1.values, h1.step(), 1);
    let d2 = derivative(&h2.values, h2.step(), 1);
    let mut violations = Vec::new();

    let coefficient: Vec<f64> = (0..n).map(|i| h1.values[i] * d2[i] - h2.values[i] * d1[i]).collect();
    let (min_idx, &min_coefficient) = coefficient
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    let coefficient_positive = min_coefficient > 0.0;
    if !coefficient_positive {
        violations.push(format!("h1*h2' - h2*h1' = {min_coefficient:e} <= 0 at r = {:.4}", radii[min_idx]));
    }

    let h1_positive = h1.values.iter().all(|&v| v > 0.0);
    if !h1_positive {
        violations.push("h1 is not positive".into());
    }
    let h1_non_increasing = h1.values.windows(2).all(|w| w[1] <= w[0] + MONOTONE_SLACK);
    if !h1_non_increasing {
        violations.push("h1 is not non-increasing".into());
    }
    let h2_non_decreasing = h2.values.windows(2).all(|w| w[1] + MONOTONE_SLACK >= w[0]);
    if !h2_non_decreasing {
        violations.push("h2 is not non-decreasing".into());
    }
    let h2_quadratic_near_zero = (0..QUADRATIC_PROBES.min(n)).all(|i| {
        let expected = radii[i] * radii[i];
        (h2.values[i] - expected).abs() <= 1e-9 * expected.max(1e-300) + 1e-15
    });
    if !h2_quadratic_near_zero {
        violations.push("h2 does not equal r^2 near 0".into());
    }
    let passed = violations.is_empty();
    Ok(BindingReport {
        min_coefficient,
        min_r: radii[min_idx],
        coefficient_positive,
        h1_positive,
        h1_non_increasing,
        h2_non_decreasing,
        h2_quadratic_near_zero,
        violations,
        passed,
    })
}

/// Collar report for the default circle family on the default grid; attached
/// to contact certificates.
pub fn default_collar_report() -> Result<CollarReport> {
    static REPORT: OnceLock<Result<CollarReport>> = OnceLock::new();
    REPORT
        .get_or_init(|| {
            let grid = GridSpec::default();
            collar_min_k(&CollarFamily::circle().sample(&grid)?, &grid)
        })
        .clone()
}
