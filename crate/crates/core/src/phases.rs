//! Gravitational phase shifts accumulated by the four path pairs.
//!
//! Both objects split along x during `[0, τ]`, hold the superposition for a
//! time `T`, and refocus during `[T+τ, T+2τ]`. Object B sits a distance `D`
//! to the right of A; the superposition span is `L = 2 v_x τ`. The phase of
//! the pair (a, b) is `(G m_A m_B / ħ) ∫ dt / |x_A^a(t) − x_B^b(t)|`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// One of the two paths of a superposed object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Path {
    L,
    R,
}

impl Path {
    pub const BOTH: [Path; 2] = [Path::L, Path::R];

    /// `ε^L = −1`, `ε^R = +1`.
    pub fn epsilon(self) -> i32 {
        match self {
            Path::L => -1,
            Path::R => 1,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Path::L => 0,
            Path::R => 1,
        }
    }
}

/// Index of the pair `(a, b)` in the ordered basis (LL, LR, RL, RR).
pub fn pair_index(a: Path, b: Path) -> usize {
    2 * a.index() + b.index()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMethod {
    ClosedFormExact,
    LargeT,
    Quadrature,
    /// Built directly from given phase values.
    Custom,
}

/// The four phases Φ_LL, Φ_LR, Φ_RL, Φ_RR in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSet {
    pub phi_ll: f64,
    pub phi_lr: f64,
    pub phi_rl: f64,
    pub phi_rr: f64,
    pub method: PhaseMethod,
}

impl PhaseSet {
    pub fn new(phi_ll: f64, phi_lr: f64, phi_rl: f64, phi_rr: f64) -> Self {
        Self {
            phi_ll,
            phi_lr,
            phi_rl,
            phi_rr,
            method: PhaseMethod::Custom,
        }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    fn from_array(phi: [f64; 4], method: PhaseMethod) -> Self {
        Self {
            phi_ll: phi[0],
            phi_lr: phi[1],
            phi_rl: phi[2],
            phi_rr: phi[3],
            method,
        }
    }

    /// Phases in basis order (LL, LR, RL, RR).
    pub fn as_array(&self) -> [f64; 4] {
        [self.phi_ll, self.phi_lr, self.phi_rl, self.phi_rr]
    }

    pub fn get(&self, a: Path, b: Path) -> f64 {
        self.as_array()[pair_index(a, b)]
    }

    /// The entangling combination `Φ_RL + Φ_LR − Φ_LL − Φ_RR`.
    pub fn entangling_phase(&self) -> f64 {
        self.phi_rl + self.phi_lr - self.phi_ll - self.phi_rr
    }

    pub fn max_relative_diff(&self, other: &PhaseSet) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| {
                let scale = a.abs().max(b.abs());
                if scale == 0.0 {
                    0.0
                } else {
                    (a - b).abs() / scale
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Trajectory geometry and physical constants, in any consistent units.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    /// D
    pub separation: f64,
    /// L
    pub span: f64,
    /// T
    pub hold_time: f64,
    /// τ
    pub split_time: f64,
    pub mass_a: f64,
    pub mass_b: f64,
    pub gravitational_constant: f64,
    pub hbar: f64,
    /// Splitting speed; when absent it is inferred as `L / (2τ)`.
    pub v_x: Option<f64>,
    /// Common drift along y. Cancels in the separation.
    pub v_y: f64,
}

impl Geometry {
    /// Geometry in natural units (`G = ħ = m_A = m_B = 1`) with `D = 1`, so
    /// that `θ = T` and `r = L`.
    pub fn natural(ratio: f64, hold_time: f64, split_time: f64) -> Self {
        Self {
            separation: 1.0,
            span: ratio,
            hold_time,
            split_time,
            mass_a: 1.0,
            mass_b: 1.0,
            gravitational_constant: 1.0,
            hbar: 1.0,
            v_x: None,
            v_y: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("separation D", self.separation),
            ("span L", self.span),
            ("mass m_A", self.mass_a),
            ("mass m_B", self.mass_b),
            ("gravitational constant G", self.gravitational_constant),
            ("hbar", self.hbar),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidGeometry(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("hold time T", self.hold_time),
            ("split time tau", self.split_time),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidGeometry(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        if !self.v_y.is_finite() {
            return Err(Error::InvalidGeometry("v_y must be finite".into()));
        }
        if self.separation <= self.span {
            return Err(Error::DegenerateGeometry {
                d: self.separation,
                l: self.span,
            });
        }
        if let Some(vx) = self.v_x {
            let implied = 2.0 * vx * self.split_time;
            if !(vx.is_finite() && vx > 0.0) || (implied - self.span).abs() > 1e-9 * self.span {
                return Err(Error::InvalidGeometry(format!(
                    "span L = {} inconsistent with 2 v_x tau = {implied}",
                    self.span
                )));
            }
        }
        Ok(())
    }

    /// `G m_A m_B / ħ`.
    pub fn coupling(&self) -> f64 {
        self.gravitational_constant * self.mass_a * self.mass_b / self.hbar
    }

    fn speed_x(&self) -> f64 {
        self.v_x.unwrap_or(self.span / (2.0 * self.split_time))
    }

    /// x-offset of a path at time `t`.
    fn path_offset(&self, path: Path, t: f64) -> f64 {
        let vx = self.speed_x();
        let tau = self.split_time;
        let hold_end = self.hold_time + tau;
        let magnitude = if t <= tau {
            vx * t
        } else if t <= hold_end {
            vx * tau
        } else {
            vx * (hold_end - t) + vx * tau
        };
        path.epsilon() as f64 * magnitude
    }

    /// 3D distance between A on path `a` and B on path `b` at time `t`.
    fn distance(&self, a: Path, b: Path, t: f64) -> f64 {
        let pos_a = [self.path_offset(a, t), self.v_y * t, 0.0];
        let pos_b = [self.path_offset(b, t) + self.separation, self.v_y * t, 0.0];
        pos_a
            .iter()
            .zip(pos_b)
            .map(|(p, q)| (p - q) * (p - q))
            .sum::<f64>()
            .sqrt()
    }
}

/// `(θ, r)` with `θ = G m_A m_B T / (ħ D)` and `r = L / D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessPoint {
    pub theta: f64,
    pub ratio: f64,
}

impl DimensionlessPoint {
    pub fn new(theta: f64, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::RatioOutOfRange(ratio));
        }
        if !(theta.is_finite() && theta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "theta must be finite and non-negative, got {theta}"
            )));
        }
        Ok(Self { theta, ratio })
    }
}

/// θ for a hold time expressed in units of `π ħ D / (G m_A m_B)`.
pub fn theta_from_panel_time(t: f64) -> f64 {
    PI * t
}

fn exact_phase(g: &Geometry, a: Path, b: Path) -> f64 {
    let de = b.epsilon() - a.epsilon();
    let (d, l, tau) = (g.separation, g.span, g.split_time);
    let gap = d + de as f64 * l / 2.0;
    let ramps = if de == 0 {
        2.0 * tau / d
    } else {
        let x = de as f64 * l / (2.0 * d);
        4.0 * tau / (de as f64 * l) * x.ln_1p()
    };
    g.coupling() * (ramps + g.hold_time / gap)
}

fn large_t_phase(g: &Geometry, a: Path, b: Path) -> f64 {
    let de = b.epsilon() - a.epsilon();
    let gap = g.separation + de as f64 * g.span / 2.0;
    g.coupling() * (g.hold_time / gap)
}

fn collect(method: PhaseMethod, mut f: impl FnMut(Path, Path) -> f64) -> PhaseSet {
    let mut phi = [0.0; 4];
    for a in Path::BOTH {
        for b in Path::BOTH {
            phi[pair_index(a, b)] = f(a, b);
        }
    }
    PhaseSet::from_array(phi, method)
}

/// Exact phases including the split and refocus ramps.
pub fn phases_exact(g: &Geometry) -> Result<PhaseSet> {
    g.validate()?;
    Ok(collect(PhaseMethod::ClosedFormExact, |a, b| {
        exact_phase(g, a, b)
    }))
}

/// Phases with the ramps dropped (`T ≫ τ`).
pub fn phases_large_t(g: &Geometry) -> Result<PhaseSet> {
    g.validate()?;
    Ok(collect(PhaseMethod::LargeT, |a, b| large_t_phase(g, a, b)))
}

/// Composite Simpson integration of the Newtonian potential along the
/// trajectories; `steps` intervals per segment (rounded up to even).
pub fn phases_quadrature(g: &Geometry, steps: usize) -> Result<PhaseSet> {
    g.validate()?;
    if steps < 100 {
        return Err(Error::InvalidParameter(format!(
            "quadrature needs at least 100 steps, got {steps}"
        )));
    }
    let n = steps + steps % 2;
    let tau = g.split_time;
    let segments = [
        (0.0, tau),
        (tau, tau + g.hold_time),
        (tau + g.hold_time, 2.0 * tau + g.hold_time),
    ];
    Ok(collect(PhaseMethod::Quadrature, |a, b| {
        let integral: f64 = segments
            .iter()
            .map(|&(t0, t1)| simpson(|t| 1.0 / g.distance(a, b, t), t0, t1, n))
            .sum();
        g.coupling() * integral
    }))
}

fn simpson(f: impl Fn(f64) -> f64, t0: f64, t1: f64, n: usize) -> f64 {
    if t1 <= t0 {
        return 0.0;
    }
    let h = (t1 - t0) / n as f64;
    let mut acc = f(t0) + f(t1);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(t0 + k as f64 * h);
    }
    acc * h / 3.0
}

pub fn to_dimensionless(g: &Geometry) -> Result<DimensionlessPoint> {
    g.validate()?;
    DimensionlessPoint::new(
        g.coupling() * g.hold_time / g.separation,
        g.span / g.separation,
    )
}

/// Large-T phases `(θ, θ/(1+r), θ/(1−r), θ)`.
pub fn from_dimensionless(p: DimensionlessPoint) -> Result<PhaseSet> {
    let DimensionlessPoint { theta, ratio } = DimensionlessPoint::new(p.theta, p.ratio)?;
    Ok(PhaseSet::from_array(
        [theta, theta / (1.0 + ratio), theta / (1.0 - ratio), theta],
        PhaseMethod::LargeT,
    ))
}
