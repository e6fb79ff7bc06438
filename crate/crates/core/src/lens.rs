//! Lenses: intersections of two unit balls in ℝⁿ.
//!
//! Coordinates are split as `(w, z)` with `w ∈ ℝⁿ⁻¹` the base plane and `z`
//! the height. For centers `c₊ = (x₀, z₊)` and `c₋ = (y₀, z₋)` the four cap
//! graphs are
//!
//! ```text
//! f_u = z₊ + S₊,   f_d = S₊ − z₊,   g_u = z₋ + S₋,   g_d = S₋ − z₋,
//! ```
//!
//! with `S(w) = √(1 − ‖w − base‖²)`, so the lens is `max(−f_d, −g_d) ≤ z ≤
//! min(f_u, g_u)`. The Steiner symmetral in direction `eₙ` has upper boundary
//! `h = (min(f_u, g_u) − max(−f_d, −g_d)) / 2`.
//!
//! Cap centers are kept in double-double precision: nearly flat lenses put
//! the base point within ~1e-12 of a cap rim.

use serde::Serialize;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::geom::{unit_ball_volume, Point, EPS_GEOM};
use crate::quad::integrate_sin_substitution;

/// Quadrature tolerance for `F_n`.
pub const EPS_QUAD: f64 = 1e-12;
/// Default counterexample center `c₀`; the lens is `B(c₀, 1) ∩ B(−c₀, 1)`.
pub const COUNTEREXAMPLE_C0: [f64; 3] = [-0.2794, 0.2451, 0.36];
/// Default base point of the counterexample.
pub const COUNTEREXAMPLE_W: [f64; 2] = [0.4154, 0.7262];
/// Largest parameter tried by [`flat_counterexample`].
pub const FLAT_T_MAX: f64 = 1_152_921_504_606_846_976.0; // 2^60
/// Gradient convention checked by [`construct_lens_with_gradients`].
pub const GRADIENT_CONVENTION: &str = "grad f_d(0) = u, grad g_u(0) = v";

/// `ψ(s, t) = √(1 + s² + t²)(1 + s²)`.
#[inline]
pub fn psi(s: f64, t: f64) -> f64 {
    (1.0 + s * s + t * t).sqrt() * (1.0 + s * s)
}

/// Sectional curvature of a graph in direction `dir` from its directional
/// second derivative and gradient.
pub fn sectional_curvature(hessian_dir: f64, gradient: &[f64], dir: &[f64]) -> f64 {
    let s: f64 = gradient.iter().zip(dir).map(|(g, d)| g * d).sum();
    let g2: f64 = gradient.iter().map(|g| g * g).sum();
    let t = (g2 - s * s).max(0.0).sqrt();
    hessian_dir.abs() / psi(s, t)
}

/// `R(t) = ψ(mid) / mean(ψ(P₀), ψ(P₁))` for `P₀ = (2t, 0)`, `P₁ = (0, 2tᵏ)`, closed form.
pub fn psi_gap(t: f64, k: f64) -> f64 {
    let tk = t.powf(k);
    let num = 2.0 * (1.0 + t * t + tk * tk).sqrt() * (1.0 + t * t);
    let den = (1.0 + 4.0 * t * t).powf(1.5) + (1.0 + 4.0 * tk * tk).sqrt();
    num / den
}

/// [`psi_gap`] evaluated through [`psi`] at the three points.
pub fn psi_gap_via_psi(t: f64, k: f64) -> f64 {
    let p0 = (2.0 * t, 0.0);
    let p1 = (0.0, 2.0 * t.powf(k));
    let mid = psi(0.5 * (p0.0 + p1.0), 0.5 * (p0.1 + p1.1));
    mid / (0.5 * (psi(p0.0, p0.1) + psi(p1.0, p1.1)))
}

/// `F_n(d) = ∫₀^d (√(1−t²) − √(1−d²))^{n−1} dt`, with `F₁(d) = d`.
pub fn f_n(n: usize, d: f64) -> Result<f64> {
    f_n_tol(n, d, EPS_QUAD)
}

fn f_n_tol(n: usize, d: f64, tol: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("F_n needs n >= 1".into()));
    }
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::InvalidArgument(format!("F_n needs d in [0, 1], got {d}")));
    }
    if n == 1 {
        return Ok(d);
    }
    let floor = (1.0 - d * d).sqrt();
    let e = (n - 1) as i32;
    integrate_sin_substitution(|t| ((1.0 - t * t).max(0.0).sqrt() - floor).max(0.0).powi(e), 0.0, d, tol)
}

/// Volume of the c-hull of two points at distance `2d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum LensVolume {
    Finite(f64),
    /// The points are more than 2 apart; the c-hull is all of ℝⁿ.
    Unbounded,
}

impl LensVolume {
    pub fn value(self) -> f64 {
        match self {
            LensVolume::Finite(v) => v,
            LensVolume::Unbounded => f64::INFINITY,
        }
    }
}

/// `2κ_{n−1} F_n(d)` for `d ≤ 1`.
pub fn lens_volume(n: usize, d: f64) -> Result<LensVolume> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("lens volume needs n >= 2, got {n}")));
    }
    if !(d >= 0.0) {
        return Err(Error::InvalidArgument(format!("negative half-distance {d}")));
    }
    if d > 1.0 {
        return Ok(LensVolume::Unbounded);
    }
    Ok(LensVolume::Finite(2.0 * unit_ball_volume(n - 1) * f_n(n, d)?))
}

/// Central difference of `F_n` at `d` against `(n−1) d (1−d²)^{−1/2} F_{n−1}(d)`.
pub fn lens_volume_derivative_check(n: usize, d: f64) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    if !(d > 0.0 && d < 1.0 - 1e-4) {
        return Err(Error::InvalidArgument(format!(
            "derivative check needs d in (0, 1 - 1e-4), got {d}"
        )));
    }
    // F_n is odd in d, which keeps the stencil valid for d below the step
    let odd = |x: f64| f_n_tol(n, x.abs(), 1e-15).map(|v| v.copysign(x));
    let step = 1e-5;
    let lhs = (odd(d + step)? - odd(d - step)?) / (2.0 * step);
    let rhs = (n - 1) as f64 * d / (1.0 - d * d).sqrt() * f_n(n - 1, d)?;
    Ok((lhs, rhs))
}

/// Tip half-distance of a lens whose centers are `center_distance` apart.
pub fn tip_half_distance(center_distance: f64) -> f64 {
    (1.0 - 0.25 * center_distance * center_distance).max(0.0).sqrt()
}

/// Center distance of a lens with tips `2d` apart.
pub fn center_distance(d: f64) -> f64 {
    2.0 * (1.0 - d * d).max(0.0).sqrt()
}

/// Volume of `conv_c{x, y}`.
pub fn two_point_chull_volume(x: &Point, y: &Point) -> Result<LensVolume> {
    if x.dim() != y.dim() {
        return Err(Error::InvalidArgument("points of different dimension".into()));
    }
    lens_volume(x.dim(), 0.5 * x.dist(y))
}

/// Indices of the centers whose spheres pass through `p`, which must lie on
/// the boundary of the intersection of the unit balls at `centers`.
pub fn supporting_balls(centers: &[Point], p: &Point) -> Result<Vec<usize>> {
    if centers.is_empty() {
        return Err(Error::EmptyInput("centers"));
    }
    if centers.iter().any(|c| c.dim() != p.dim()) {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    let far = centers.iter().map(|c| c.dist(p)).fold(0.0, f64::max);
    if far > 1.0 + EPS_GEOM {
        return Err(Error::NotOnBoundary("point lies outside the body"));
    }
    if far < 1.0 - EPS_GEOM {
        return Err(Error::NotOnBoundary("point lies in the interior"));
    }
    Ok((0..centers.len())
        .filter(|&i| (centers[i].dist(p) - 1.0).abs() <= EPS_GEOM)
        .collect())
}

/// A unit sphere seen as two graphs over the base plane.
#[derive(Debug, Clone, PartialEq)]
struct Cap {
    base: Vec<Dd>,
    height: f64,
}

/// `S`, `∇S` and `∇²S` at one point.
#[derive(Debug, Clone, PartialEq)]
struct CapJet {
    s: Dd,
    gradient: Vec<f64>,
    hessian: Vec<Vec<f64>>,
}

impl Cap {
    fn offsets(&self, w: &[f64]) -> Vec<Dd> {
        w.iter().zip(&self.base).map(|(&wi, &b)| Dd::from(wi) - b).collect()
    }

    fn radicand(&self, w: &[f64]) -> Dd {
        self.offsets(w).iter().fold(Dd::ONE, |acc, &d| acc - d * d)
    }

    fn value(&self, w: &[f64]) -> Option<Dd> {
        let r = self.radicand(w);
        (r.hi > 0.0).then(|| r.sqrt())
    }

    fn jet(&self, w: &[f64]) -> Option<CapJet> {
        let d: Vec<f64> = self.offsets(w).iter().map(|x| x.to_f64()).collect();
        let r = self.radicand(w);
        if r.hi <= 0.0 {
            return None;
        }
        let s = r.sqrt();
        let sf = s.to_f64();
        let s3 = sf * sf * sf;
        let m = d.len();
        let gradient = d.iter().map(|di| -di / sf).collect();
        let hessian = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| -(if i == j { 1.0 / sf } else { 0.0 } + d[i] * d[j] / s3))
                    .collect()
            })
            .collect();
        Some(CapJet { s, gradient, hessian })
    }

    /// Distance from `w` to the rim of the cap domain.
    fn rim_distance(&self, w: &[f64]) -> Dd {
        let r2 = self.offsets(w).iter().fold(Dd::ZERO, |acc, &d| acc + d * d);
        // 1 − r = (1 − r²) / (1 + r) avoids cancellation
        (Dd::ONE - r2) / (Dd::ONE + r2.sqrt())
    }
}

/// The four cap graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Patch {
    FUp,
    FDown,
    GUp,
    GDown,
}

impl Patch {
    pub const ALL: [Patch; 4] = [Patch::FUp, Patch::FDown, Patch::GUp, Patch::GDown];

    pub fn name(self) -> &'static str {
        match self {
            Patch::FUp => "f_u",
            Patch::FDown => "f_d",
            Patch::GUp => "g_u",
            Patch::GDown => "g_d",
        }
    }
}

/// Value, gradient and Hessian of a patch function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatchJet {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub hessian: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberKind {
    /// Both fiber ends lie on the same sphere.
    OneBall,
    /// The bottom end lies on one sphere and the top end on the other.
    Cross,
    Outside,
}

/// Value, gradient and Hessian of the symmetral's upper boundary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetralJet {
    pub height: f64,
    pub gradient: Vec<f64>,
    pub hessian: Vec<Vec<f64>>,
    pub kind: FiberKind,
}

impl SymmetralJet {
    pub fn hessian_along(&self, dir: &[f64]) -> f64 {
        let m = dir.len();
        (0..m)
            .map(|i| (0..m).map(|j| dir[i] * self.hessian[i][j] * dir[j]).sum::<f64>())
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lens {
    dim: usize,
    c_plus: Point,
    c_minus: Point,
    #[serde(skip)]
    plus: Cap,
    #[serde(skip)]
    minus: Cap,
}

impl Lens {
    pub fn new(c_plus: Point, c_minus: Point) -> Result<Self> {
        let dim = c_plus.dim();
        if dim < 2 || c_minus.dim() != dim {
            return Err(Error::InvalidArgument(format!(
                "lens centers need a common dimension >= 2, got {} and {}",
                dim,
                c_minus.dim()
            )));
        }
        if c_plus.dist(&c_minus) >= 2.0 {
            return Err(Error::InvalidArgument("lens centers at distance >= 2".into()));
        }
        let cap = |c: &Point| Cap {
            base: c.coords()[..dim - 1].iter().map(|&x| Dd::from(x)).collect(),
            height: c.coords()[dim - 1],
        };
        Ok(Self {
            dim,
            plus: cap(&c_plus),
            minus: cap(&c_minus),
            c_plus,
            c_minus,
        })
    }

    /// `B(c₀, 1) ∩ B(−c₀, 1)`.
    pub fn symmetric(c0: &Point) -> Result<Self> {
        let neg = Point::new(c0.coords().iter().map(|x| -x).collect())?;
        Self::new(c0.clone(), neg)
    }

    fn from_caps(plus: Cap, minus: Cap) -> Result<Self> {
        let point = |c: &Cap| {
            let mut v: Vec<f64> = c.base.iter().map(|x| x.to_f64()).collect();
            v.push(c.height);
            Point::new(v)
        };
        let mut lens = Self::new(point(&plus)?, point(&minus)?)?;
        lens.plus = plus;
        lens.minus = minus;
        Ok(lens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c_plus(&self) -> &Point {
        &self.c_plus
    }

    pub fn c_minus(&self) -> &Point {
        &self.c_minus
    }

    pub fn center_distance(&self) -> f64 {
        self.c_plus.dist(&self.c_minus)
    }

    pub fn tip_half_distance(&self) -> f64 {
        tip_half_distance(self.center_distance())
    }

    pub fn contains(&self, p: &Point, eps: f64) -> bool {
        self.c_plus.dist(p) <= 1.0 + eps && self.c_minus.dist(p) <= 1.0 + eps
    }

    fn check_base(&self, w: &[f64]) -> Result<()> {
        if w.len() + 1 != self.dim || w.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "base point needs {} finite coordinates",
                self.dim - 1
            )));
        }
        Ok(())
    }

    pub fn patch(&self, which: Patch, w: &[f64]) -> Result<PatchJet> {
        self.check_base(w)?;
        let (cap, up) = match which {
            Patch::FUp => (&self.plus, true),
            Patch::FDown => (&self.plus, false),
            Patch::GUp => (&self.minus, true),
            Patch::GDown => (&self.minus, false),
        };
        let jet = cap.jet(w).ok_or(Error::OutsidePatch(which.name()))?;
        let s = jet.s.to_f64();
        Ok(PatchJet {
            value: if up { cap.height + s } else { s - cap.height },
            gradient: jet.gradient,
            hessian: jet.hessian,
        })
    }

    /// `f_u, f_d, g_u, g_d` at `w`, in that order.
    pub fn patches(&self, w: &[f64]) -> Result<[PatchJet; 4]> {
        Ok([
            self.patch(Patch::FUp, w)?,
            self.patch(Patch::FDown, w)?,
            self.patch(Patch::GUp, w)?,
            self.patch(Patch::GDown, w)?,
        ])
    }

    pub fn fiber_classification(&self, w: &[f64]) -> Result<FiberKind> {
        self.check_base(w)?;
        let (Some(sp), Some(sm)) = (self.plus.value(w), self.minus.value(w)) else {
            return Ok(FiberKind::Outside);
        };
        let (sp, sm) = (sp.to_f64(), sm.to_f64());
        let (zp, zm) = (self.plus.height, self.minus.height);
        let (fu, fd_neg, gu, gd_neg) = (zp + sp, zp - sp, zm + sm, zm - sm);
        if fu.min(gu) < fd_neg.max(gd_neg) - EPS_GEOM {
            return Ok(FiberKind::Outside);
        }
        let chain = |a: f64, b: f64, c: f64, d: f64| a + EPS_GEOM < b && b + EPS_GEOM < c && c + EPS_GEOM < d;
        if chain(gd_neg, fd_neg, gu, fu) || chain(fd_neg, gd_neg, fu, gu) {
            Ok(FiberKind::Cross)
        } else {
            Ok(FiberKind::OneBall)
        }
    }

    /// Jet of `h` at `w`, taking the active cap at each fiber end.
    pub fn symmetral_jet(&self, w: &[f64]) -> Result<SymmetralJet> {
        let kind = self.fiber_classification(w)?;
        if kind == FiberKind::Outside {
            return Err(Error::OutsidePatch("lens projection"));
        }
        let jp = self.plus.jet(w).ok_or(Error::OutsidePatch("f"))?;
        let jm = self.minus.jet(w).ok_or(Error::OutsidePatch("g"))?;
        let (sp, sm) = (jp.s.to_f64(), jm.s.to_f64());
        let (zp, zm) = (self.plus.height, self.minus.height);
        let (top, top_h) = if zp + sp <= zm + sm { (&jp, zp + sp) } else { (&jm, zm + sm) };
        let (bot, bot_h) = if zp - sp >= zm - sm { (&jp, zp - sp) } else { (&jm, zm - sm) };
        // top = z + S_top and bottom = z − S_bot, so their difference has
        // derivatives ∇S_top + ∇S_bot
        let m = w.len();
        Ok(SymmetralJet {
            height: 0.5 * (top_h - bot_h),
            gradient: (0..m).map(|i| 0.5 * (top.gradient[i] + bot.gradient[i])).collect(),
            hessian: (0..m)
                .map(|i| (0..m).map(|j| 0.5 * (top.hessian[i][j] + bot.hessian[i][j])).collect())
                .collect(),
            kind,
        })
    }
}

/// Sectional curvature of the Steiner symmetral's upper boundary above `w`
/// in base direction `dir`. With `allow_one_ball`, fibers ending on a single
/// sphere are evaluated too (their curvature is that of the sphere).
pub fn steiner_fiber_curvature(l: &Lens, w: &[f64], dir: &[f64], allow_one_ball: bool) -> Result<f64> {
    if dir.len() != w.len() {
        return Err(Error::InvalidArgument("direction and base point differ in dimension".into()));
    }
    let jet = l.symmetral_jet(w)?;
    if jet.kind == FiberKind::OneBall && !allow_one_ball {
        return Err(Error::SingleSphereFiber);
    }
    Ok(sectional_curvature(jet.hessian_along(dir), &jet.gradient, dir))
}

/// Counts of fiber kinds over a square grid covering both cap domains.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct FiberCensus {
    pub cross: usize,
    pub one_ball: usize,
    pub outside: usize,
}

/// Classifies fibers over a `grid × grid` sample of the base plane (3D lenses).
pub fn fiber_census(l: &Lens, grid: usize) -> Result<FiberCensus> {
    if l.dim() != 3 || grid < 2 {
        return Err(Error::InvalidArgument("fiber census needs a 3D lens and grid >= 2".into()));
    }
    let mut census = FiberCensus::default();
    let (a, b) = (l.c_plus.coords(), l.c_minus.coords());
    let (x0, x1) = (a[0].min(b[0]) - 1.0, a[0].max(b[0]) + 1.0);
    let (y0, y1) = (a[1].min(b[1]) - 1.0, a[1].max(b[1]) + 1.0);
    for i in 0..grid {
        for j in 0..grid {
            let w = [
                x0 + (x1 - x0) * i as f64 / (grid - 1) as f64,
                y0 + (y1 - y0) * j as f64 / (grid - 1) as f64,
            ];
            match l.fiber_classification(&w)? {
                FiberKind::Cross => census.cross += 1,
                FiberKind::OneBall => census.one_ball += 1,
                FiberKind::Outside => census.outside += 1,
            }
        }
    }
    Ok(census)
}

/// One reported number.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    pub name: String,
    pub computed: f64,
    pub paper_value: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Quantity {
    fn compare(name: &str, computed: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            computed,
            paper_value: Some(expected),
            tolerance: Some(tolerance),
            pass: (computed - expected).abs() <= tolerance,
        }
    }

    fn flag(name: &str, computed: f64, pass: bool) -> Self {
        Self {
            name: name.into(),
            computed,
            paper_value: None,
            tolerance: None,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub c0: [f64; 3],
    pub w: [f64; 2],
    pub direction: [f64; 2],
    pub classification: FiberKind,
    /// `−g_d < −f_d < g_u < f_u` at `w`.
    pub ordering_holds: bool,
    pub quantities: Vec<Quantity>,
    pub curvature: f64,
    /// "violation" when the curvature is below 1, else "no violation".
    pub verdict: String,
    pub pass: bool,
}

/// Recomputes the counterexample at the built-in data.
pub fn verify_counterexample() -> Result<CounterexampleReport> {
    verify_counterexample_at(COUNTEREXAMPLE_C0, COUNTEREXAMPLE_W, [1.0, 0.0])
}

/// The counterexample recomputation for the lens `B(c₀,1) ∩ B(−c₀,1)` at base
/// point `w`, with curvature taken in direction `dir`.
pub fn verify_counterexample_at(c0: [f64; 3], w: [f64; 2], dir: [f64; 2]) -> Result<CounterexampleReport> {
    let dn = (dir[0] * dir[0] + dir[1] * dir[1]).sqrt();
    if !(dn > 0.0) {
        return Err(Error::InvalidArgument("zero curvature direction".into()));
    }
    let dir = [dir[0] / dn, dir[1] / dn];
    let l = Lens::symmetric(&Point::new(c0.to_vec())?)?;
    let classification = l.fiber_classification(&w)?;
    if classification == FiberKind::Outside {
        return Err(Error::OutsidePatch("lens projection"));
    }
    let [fu, fd, gu, gd] = l.patches(&w)?;
    let ordering_holds = -gd.value < -fd.value && -fd.value < gu.value && gu.value < fu.value;
    let jet = l.symmetral_jet(&w)?;
    let curvature = sectional_curvature(jet.hessian_along(&dir), &jet.gradient, &dir);
    let split = |g: &[f64]| {
        let s = g[0] * dir[0] + g[1] * dir[1];
        (s, (g[0] * g[0] + g[1] * g[1] - s * s).max(0.0).sqrt())
    };
    let (ms, mt) = split(&jet.gradient);
    let (fs, ft) = split(&fd.gradient);
    let (gs, gt) = split(&gu.gradient);
    let psi_mid = psi(ms, mt);
    let psi_mean = 0.5 * (psi(fs, ft) + psi(gs, gt));
    let quantities = vec![
        Quantity::compare("-g_d", -gd.value, -0.56, 0.01),
        Quantity::compare("-f_d", -fd.value, -0.175, 0.01),
        Quantity::compare("g_u", gu.value, -0.165, 0.01),
        Quantity::compare("f_u", fu.value, 0.89, 0.01),
        Quantity::compare("grad_f_d[0]", fd.gradient[0], -1.300, 0.001),
        Quantity::compare("grad_f_d[1]", fd.gradient[1], -0.900, 0.001),
        Quantity::compare("grad_g_u[0]", gu.gradient[0], -0.697, 0.001),
        Quantity::compare("grad_g_u[1]", gu.gradient[1], -4.977, 0.001),
        Quantity::compare("psi_mid", psi_mid, 6.51, 0.01),
        Quantity::compare("psi_mean", psi_mean, 6.32, 0.01),
        Quantity::flag("curvature", curvature, curvature < 1.0),
    ];
    let violation = curvature < 1.0 - EPS_GEOM;
    let pass = ordering_holds && classification == FiberKind::Cross && quantities.iter().all(|q| q.pass);
    Ok(CounterexampleReport {
        c0,
        w,
        direction: dir,
        classification,
        ordering_holds,
        quantities,
        curvature,
        verdict: if violation { "violation" } else { "no violation" }.into(),
        pass,
    })
}

/// A lens realizing prescribed patch gradients at the base origin, with a
/// finite-difference certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LensCertificate {
    pub lens: Lens,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub convention: &'static str,
    pub fd_grad_f_d: Vec<f64>,
    pub fd_grad_g_u: Vec<f64>,
    /// Largest gradient mismatch, relative to `max(1, ‖target‖)`.
    pub gradient_error: f64,
    pub classification: FiberKind,
    pub pass: bool,
}

fn unit_ball_point(g: &[f64]) -> Vec<Dd> {
    let norm = g.iter().fold(Dd::ONE, |acc, &x| acc + Dd::from(x) * Dd::from(x)).sqrt();
    g.iter().map(|&x| Dd::from(x) / norm).collect()
}

fn fd_gradient(cap: &Cap, w: &[f64]) -> Result<Vec<f64>> {
    let step = (1e-4 * cap.rim_distance(w).to_f64()).min(1e-6);
    let mut out = Vec::with_capacity(w.len());
    for i in 0..w.len() {
        let mut a = w.to_vec();
        let mut b = w.to_vec();
        a[i] += step;
        b[i] -= step;
        let (Some(fa), Some(fb)) = (cap.value(&a), cap.value(&b)) else {
            return Err(Error::OutsidePatch("finite-difference stencil"));
        };
        let h = Dd::from(a[i]) - Dd::from(b[i]);
        out.push(((fa - fb) / h).to_f64());
    }
    Ok(out)
}

/// Builds a lens with `∇f_d(0) = u` and `∇g_u(0) = v`: the caps are centered
/// at `x₀ = u/√(1+‖u‖²)` (height `z₀`) and `y₀ = v/√(1+‖v‖²)` (height 0),
/// with `z₀ = max(S₊(0), S₋(0))` so that the fiber over 0 crosses.
pub fn construct_lens_with_gradients(u: &[f64], v: &[f64]) -> Result<LensCertificate> {
    if u.is_empty() || u.len() != v.len() || u.iter().chain(v).any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("gradients need equal, positive, finite length".into()));
    }
    let origin = vec![0.0; u.len()];
    let mut plus = Cap {
        base: unit_ball_point(u),
        height: 0.0,
    };
    let minus = Cap {
        base: unit_ball_point(v),
        height: 0.0,
    };
    let sp = plus.value(&origin).ok_or(Error::OutsidePatch("f"))?.to_f64();
    let sm = minus.value(&origin).ok_or(Error::OutsidePatch("g"))?.to_f64();
    plus.height = sp.max(sm);
    let fd_grad_f_d = fd_gradient(&plus, &origin)?;
    let fd_grad_g_u = fd_gradient(&minus, &origin)?;
    let lens = Lens::from_caps(plus, minus)?;
    let rel = |fd: &[f64], target: &[f64]| {
        let scale = target.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
        fd.iter().zip(target).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale
    };
    let gradient_error = rel(&fd_grad_f_d, u).max(rel(&fd_grad_g_u, v));
    let classification = lens.fiber_classification(&origin)?;
    Ok(LensCertificate {
        pass: gradient_error <= 1e-6 && classification == FiberKind::Cross,
        lens,
        u: u.to_vec(),
        v: v.to_vec(),
        convention: GRADIENT_CONVENTION,
        fd_grad_f_d,
        fd_grad_g_u,
        gradient_error,
        classification,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatReport {
    pub dim: usize,
    pub epsilon: f64,
    pub t: f64,
    pub psi_gap: f64,
    pub curvature: f64,
    pub certificate: LensCertificate,
    pub quantities: Vec<Quantity>,
    pub pass: bool,
}

/// A lens in ℝⁿ whose Steiner symmetral has sectional curvature below
/// `epsilon` at the point above the base origin, direction `e₁`.
pub fn flat_counterexample(epsilon: f64, dim: usize) -> Result<FlatReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if dim < 3 {
        return Err(Error::InvalidArgument(format!("flat lenses need dimension >= 3, got {dim}")));
    }
    let mut t = 1.0f64;
    while psi_gap(t, 2.0) <= 1.0 / epsilon {
        t *= 2.0;
        if t > FLAT_T_MAX {
            return Err(Error::SearchExhausted(format!("no t <= 2^60 for epsilon {epsilon}")));
        }
    }
    let m = dim - 1;
    let mut u = vec![0.0; m];
    let mut v = vec![0.0; m];
    u[0] = 2.0 * t;
    v[m - 1] = 2.0 * t * t;
    let certificate = construct_lens_with_gradients(&u, &v)?;
    let mut e1 = vec![0.0; m];
    e1[0] = 1.0;
    let curvature = steiner_fiber_curvature(&certificate.lens, &vec![0.0; m], &e1, false)?;
    let gap = psi_gap(t, 2.0);
    let quantities = vec![
        Quantity::flag("t", t, true),
        Quantity::flag("psi_gap", gap, gap > 1.0 / epsilon),
        Quantity {
            name: "curvature".into(),
            computed: curvature,
            paper_value: None,
            tolerance: Some(epsilon),
            pass: curvature < epsilon,
        },
        Quantity::compare("curvature*psi_gap", curvature * gap, 1.0, 1e-6),
        Quantity::flag("certificate_gradient_error", certificate.gradient_error, certificate.pass),
    ];
    let pass = quantities.iter().all(|q| q.pass);
    Ok(FlatReport {
        dim,
        epsilon,
        t,
        psi_gap: gap,
        curvature,
        certificate,
        quantities,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn counterexample_lens() -> Lens {
        Lens::symmetric(&Point::new(COUNTEREXAMPLE_C0.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn psi_values() {
        assert_eq!(psi(0.0, 0.0), 1.0);
        assert_abs_diff_eq!(psi(-1.2997, -0.9000), 5.0305, epsilon = 1e-4);
        assert_eq!(psi(0.3, -0.7), psi(0.3, 0.7));
        assert_eq!(psi(-0.3, 0.7), psi(0.3, 0.7));
    }

    #[test]
    fn psi_gap_routes_agree() {
        assert_abs_diff_eq!(psi_gap(10.0, 2.0), 2.4668, epsilon = 1e-4);
        assert_abs_diff_eq!(psi_gap(1e-9, 2.0), 1.0, epsilon = 1e-12);
        for &t in &[0.01, 0.5, 1.0, 3.0, 10.0, 100.0, 1000.0] {
            for &k in &[1.5, 2.0, 3.0] {
                let a = psi_gap(t, k);
                let b = psi_gap_via_psi(t, k);
                assert!((a - b).abs() <= 1e-10 * a.max(1.0), "t={t} k={k}");
            }
        }
        let mut t = 10.0;
        while t < 1e6 {
            assert!(psi_gap(2.0 * t, 2.0) > psi_gap(t, 2.0));
            t *= 2.0;
        }
    }

    #[test]
    fn curvature_of_simple_graphs() {
        // paraboloid ½x² at the origin
        assert_eq!(sectional_curvature(1.0, &[0.0, 0.0], &[1.0, 0.0]), 1.0);
        let cap = Cap {
            base: vec![Dd::from(0.2), Dd::from(-0.1)],
            height: 0.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let r = 0.95 * rng.gen::<f64>().sqrt();
            let a = rng.gen_range(0.0..2.0 * PI);
            let w = [0.2 + r * a.cos(), -0.1 + r * a.sin()];
            let jet = cap.jet(&w).unwrap();
            let b = rng.gen_range(0.0..2.0 * PI);
            let dir = [b.cos(), b.sin()];
            let hdd: f64 = (0..2).map(|i| (0..2).map(|j| dir[i] * jet.hessian[i][j] * dir[j]).sum::<f64>()).sum();
            assert_abs_diff_eq!(sectional_curvature(hdd, &jet.gradient, &dir), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn f_n_closed_forms() {
        for i in 0..=400 {
            let d = i as f64 / 400.0;
            let closed = 0.5 * (d.asin() - d * (1.0 - d * d).sqrt());
            assert_abs_diff_eq!(f_n(2, d).unwrap(), closed, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(f_n(2, 0.5).unwrap(), 0.045293, epsilon = 1e-6);
        assert_eq!(f_n(1, 0.3).unwrap(), 0.3);
    }

    #[test]
    fn lens_volume_values() {
        assert_eq!(lens_volume(3, 0.0).unwrap(), LensVolume::Finite(0.0));
        assert_abs_diff_eq!(lens_volume(2, 1.0).unwrap().value(), PI, epsilon = 1e-11);
        let closed = 4.0 * 0.5 * (0.5f64.asin() - 0.5 * 0.75f64.sqrt());
        assert_abs_diff_eq!(lens_volume(2, 0.5).unwrap().value(), closed, epsilon = 1e-12);
        assert_eq!(lens_volume(3, 1.2).unwrap(), LensVolume::Unbounded);
        assert!(lens_volume(3, -0.1).is_err());
        // in ℝ³ two points at distance 2 span the unit ball
        assert_abs_diff_eq!(lens_volume(3, 1.0).unwrap().value(), 4.0 * PI / 3.0, epsilon = 1e-10);
        assert_eq!(
            serde_json::to_string(&LensVolume::Unbounded).unwrap(),
            r#"{"kind":"unbounded"}"#
        );
    }

    #[test]
    fn lens_volume_convex_increasing() {
        for n in 2..=5 {
            let v: Vec<f64> = (0..401).map(|i| f_n(n, 0.99 * i as f64 / 400.0).unwrap()).collect();
            for i in 1..400 {
                assert!(v[i + 1] - 2.0 * v[i] + v[i - 1] >= -1e-9);
                assert!(v[i] > v[i - 1]);
            }
        }
    }

    #[test]
    fn derivative_identity() {
        let (_, rhs) = lens_volume_derivative_check(2, 0.5).unwrap();
        assert_abs_diff_eq!(rhs, 0.28868, epsilon = 1e-5);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let d = rng.gen_range(0.01..0.99);
            for n in 2..=5 {
                let (l, r) = lens_volume_derivative_check(n, d).unwrap();
                assert!((l - r).abs() <= 1e-6 * r.max(1.0), "n={n} d={d}: {l} vs {r}");
            }
        }
        assert!(lens_volume_derivative_check(3, 0.99995).is_err());
        assert!(lens_volume_derivative_check(2, 1e-9).unwrap().1 < 1e-8);
    }

    #[test]
    fn two_point_volume_midpoint_convex() {
        let y = Point::new(vec![0.0, 0.0, 0.0]).unwrap();
        assert_eq!(two_point_chull_volume(&y, &y).unwrap().value(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let vol = |p: &[f64]| two_point_chull_volume(&Point::new(p.to_vec()).unwrap(), &y).unwrap().value();
        for _ in 0..50 {
            let a: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let b: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let m: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
            let (fa, fb) = (vol(&a), vol(&b));
            if fa.is_finite() && fb.is_finite() {
                assert!(vol(&m) <= 0.5 * (fa + fb) + 1e-9);
            }
        }
    }

    #[test]
    fn distance_conversions() {
        for &d in &[0.0, 0.3, 0.8, 1.0] {
            assert_abs_diff_eq!(tip_half_distance(center_distance(d)), d, epsilon = 1e-12);
        }
    }

    #[test]
    fn patch_jets_match_finite_differences() {
        let l = counterexample_lens();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = 1e-4;
        let mut tested = 0;
        while tested < 40 {
            let w = [rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8)];
            let Ok(jets) = l.patches(&w) else { continue };
            let ok = |w: &[f64]| l.patches(w).is_ok();
            if !(ok(&[w[0] + 2.0 * h, w[1] + 2.0 * h]) && ok(&[w[0] - 2.0 * h, w[1] - 2.0 * h])
                && ok(&[w[0] + 2.0 * h, w[1] - 2.0 * h]) && ok(&[w[0] - 2.0 * h, w[1] + 2.0 * h]))
                || jets.iter().any(|j| j.gradient.iter().any(|g| g.abs() > 1.5))
            {
                continue;
            }
            tested += 1;
            for (k, p) in Patch::ALL.iter().enumerate() {
                let f = |x: f64, y: f64| l.patch(*p, &[x, y]).unwrap().value;
                for i in 0..2 {
                    let e = [(i == 0) as i32 as f64 * h, (i == 1) as i32 as f64 * h];
                    let fd = (f(w[0] + e[0], w[1] + e[1]) - f(w[0] - e[0], w[1] - e[1])) / (2.0 * h);
                    // f_u and f_d differ by a constant
                    assert!((fd - jets[k].gradient[i]).abs() < 1e-5 * jets[k].gradient[i].abs().max(1.0));
                }
                let fxx = (f(w[0] + h, w[1]) - 2.0 * f(w[0], w[1]) + f(w[0] - h, w[1])) / (h * h);
                let fxy = (f(w[0] + h, w[1] + h) - f(w[0] + h, w[1] - h) - f(w[0] - h, w[1] + h)
                    + f(w[0] - h, w[1] - h))
                    / (4.0 * h * h);
                let scale = jets[k].hessian[0][0].abs().max(1.0);
                assert!((fxx - jets[k].hessian[0][0]).abs() < 1e-5 * scale);
                assert!((fxy - jets[k].hessian[0][1]).abs() < 1e-5 * scale);
            }
        }
    }

    #[test]
    fn counterexample_patch_values() {
        let l = counterexample_lens();
        let [fu, fd, gu, gd] = l.patches(&COUNTEREXAMPLE_W).unwrap();
        // independently: S = √(1 − |w − base|²) for each center
        let s = |b: [f64; 2]| {
            (1.0 - (COUNTEREXAMPLE_W[0] - b[0]).powi(2) - (COUNTEREXAMPLE_W[1] - b[1]).powi(2)).sqrt()
        };
        let sp = s([-0.2794, 0.2451]);
        let sm = s([0.2794, -0.2451]);
        assert_abs_diff_eq!(fu.value, 0.36 + sp, epsilon = 1e-15);
        assert_abs_diff_eq!(-fd.value, 0.36 - sp, epsilon = 1e-15);
        assert_abs_diff_eq!(gu.value, -0.36 + sm, epsilon = 1e-15);
        assert_abs_diff_eq!(-gd.value, -0.36 - sm, epsilon = 1e-15);
        assert_abs_diff_eq!(fd.gradient[0], -(0.4154 + 0.2794) / sp, epsilon = 1e-12);
        assert_abs_diff_eq!(gu.gradient[1], -(0.7262 + 0.2451) / sm, epsilon = 1e-12);
        assert_eq!(l.fiber_classification(&COUNTEREXAMPLE_W).unwrap(), FiberKind::Cross);
        assert_eq!(l.fiber_classification(&[3.0, 3.0]).unwrap(), FiberKind::Outside);
        assert!(matches!(l.patch(Patch::FUp, &[3.0, 3.0]), Err(Error::OutsidePatch("f_u"))));
    }

    #[test]
    fn counterexample_report() {
        let r = verify_counterexample().unwrap();
        assert!(r.pass, "{r:#?}");
        assert_eq!(r.verdict, "violation");
        assert!((r.curvature - 0.9708).abs() <= 0.003);
        // curvature is the ratio of the two ψ figures
        let q = |n: &str| r.quantities.iter().find(|q| q.name == n).unwrap().computed;
        assert_abs_diff_eq!(r.curvature, q("psi_mean") / q("psi_mid"), epsilon = 1e-12);
        let sym = verify_counterexample_at([0.0, 0.0, 0.36], COUNTEREXAMPLE_W, [1.0, 0.0]).unwrap();
        assert_eq!(sym.verdict, "no violation");
        assert!(!sym.pass);
        assert_abs_diff_eq!(sym.curvature, 1.0, epsilon = 1e-9);
        let e2 = verify_counterexample_at(COUNTEREXAMPLE_C0, COUNTEREXAMPLE_W, [0.0, 1.0]).unwrap();
        assert!(e2.curvature.is_finite());
    }

    #[test]
    fn symmetral_hessian_matches_finite_differences() {
        let l = counterexample_lens();
        let w = COUNTEREXAMPLE_W;
        let jet = l.symmetral_jet(&w).unwrap();
        let h = |x: f64, y: f64| l.symmetral_jet(&[x, y]).unwrap().height;
        let s = 1e-4;
        let hxx = (h(w[0] + s, w[1]) - 2.0 * h(w[0], w[1]) + h(w[0] - s, w[1])) / (s * s);
        let hx = (h(w[0] + s, w[1]) - h(w[0] - s, w[1])) / (2.0 * s);
        assert!((hxx - jet.hessian[0][0]).abs() < 1e-5 * jet.hessian[0][0].abs().max(1.0) * 10.0);
        assert!((hx - jet.gradient[0]).abs() < 1e-5);
        // curvature from the finite-difference jet
        let hy = (h(w[0], w[1] + s) - h(w[0], w[1] - s)) / (2.0 * s);
        let k_fd = sectional_curvature(hxx, &[hx, hy], &[1.0, 0.0]);
        assert_abs_diff_eq!(k_fd, 0.97104, epsilon = 1e-3);
    }

    #[test]
    fn symmetric_lens_has_unit_curvature() {
        let l = Lens::symmetric(&Point::new(vec![0.0, 0.0, 0.36]).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut n = 0;
        while n < 50 {
            let w = [rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9)];
            match l.fiber_classification(&w).unwrap() {
                FiberKind::Outside => continue,
                kind => assert_eq!(kind, FiberKind::Cross),
            }
            let a = rng.gen_range(0.0..2.0 * PI);
            let k = steiner_fiber_curvature(&l, &w, &[a.cos(), a.sin()], false).unwrap();
            assert_abs_diff_eq!(k, 1.0, epsilon = 1e-9);
            n += 1;
        }
    }

    #[test]
    fn one_ball_fibers() {
        // centers side by side: near the outer rim only one sphere is active
        let l = Lens::new(
            Point::new(vec![0.0, 0.0, 0.5]).unwrap(),
            Point::new(vec![0.0, 0.0, -0.5]).unwrap(),
        )
        .unwrap();
        let m = Lens::new(
            Point::new(vec![-0.5, 0.0, 0.0]).unwrap(),
            Point::new(vec![0.5, 0.0, 0.0]).unwrap(),
        )
        .unwrap();
        assert_eq!(m.fiber_classification(&[0.4, 0.0]).unwrap(), FiberKind::OneBall);
        assert_eq!(
            steiner_fiber_curvature(&m, &[0.4, 0.0], &[1.0, 0.0], false).unwrap_err(),
            Error::SingleSphereFiber
        );
        let k = steiner_fiber_curvature(&m, &[0.4, 0.1], &[0.6, 0.8], true).unwrap();
        assert_abs_diff_eq!(k, 1.0, epsilon = 1e-9);
        assert_eq!(l.fiber_classification(&[0.1, 0.2]).unwrap(), FiberKind::Cross);
    }

    #[test]
    fn census_of_counterexample_lens() {
        let c = fiber_census(&counterexample_lens(), 81).unwrap();
        assert!(c.cross > 0);
        assert_eq!(c.cross + c.one_ball + c.outside, 81 * 81);
    }

    #[test]
    fn supporting_balls_cases() {
        let p = |v: Vec<f64>| Point::new(v).unwrap();
        let centers = vec![p(vec![0.0, 0.0, 0.5]), p(vec![0.0, 0.0, -0.5])];
        let tip = p(vec![0.75f64.sqrt(), 0.0, 0.0]);
        assert_eq!(supporting_balls(&centers, &tip).unwrap(), vec![0, 1]);
        let top = p(vec![0.0, 0.0, 0.5]);
        assert_eq!(supporting_balls(&centers, &top).unwrap(), vec![1]);
        assert!(supporting_balls(&centers, &p(vec![0.0, 0.0, 0.0])).is_err());
        assert!(supporting_balls(&centers, &p(vec![2.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn supporting_balls_random_body() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let centers: Vec<Point> = (0..4)
            .map(|_| Point::new((0..3).map(|_| rng.gen_range(-0.3..0.3)).collect()).unwrap())
            .collect();
        for _ in 0..20 {
            // march outward from the origin to the boundary along a random ray
            let d: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            let at = |s: f64| Point::new(d.iter().map(|x| s * x / norm).collect()).unwrap();
            let inside = |s: f64| centers.iter().all(|c| c.dist(&at(s)) <= 1.0);
            let (mut lo, mut hi) = (0.0, 2.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if inside(mid) {
                    lo = mid
                } else {
                    hi = mid
                }
            }
            let q = at(lo);
            let active = supporting_balls(&centers, &q).unwrap();
            assert!(!active.is_empty());
            for (i, c) in centers.iter().enumerate() {
                assert_eq!(active.contains(&i), (c.dist(&q) - 1.0).abs() <= EPS_GEOM);
            }
        }
    }

    #[test]
    fn constructed_lenses() {
        let c = construct_lens_with_gradients(&[0.0, 0.0], &[0.0, 0.0]).unwrap();
        assert!(c.pass);
        assert_eq!(&c.lens.c_plus().coords()[..2], &[0.0, 0.0]);
        let c = construct_lens_with_gradients(&[2.0, 0.0], &[0.0, 2.0]).unwrap();
        assert!(c.pass, "{c:?}");
        for i in 0..2 {
            assert!((c.fd_grad_f_d[i] - [2.0, 0.0][i]).abs() < 1e-6);
            assert!((c.fd_grad_g_u[i] - [0.0, 2.0][i]).abs() < 1e-6);
        }
        // counterexample gradients reproduce a curvature drop at the origin
        let c = construct_lens_with_gradients(&[-1.300, -0.900], &[-0.697, -4.977]).unwrap();
        assert!(c.pass);
        let k = steiner_fiber_curvature(&c.lens, &[0.0, 0.0], &[1.0, 0.0], false).unwrap();
        assert!(k < 1.0);
        assert_abs_diff_eq!(k, 0.9708, epsilon = 3e-3);
    }

    #[test]
    fn flat_lenses() {
        let r = flat_counterexample(0.5, 3).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.t, 16.0);
        for eps in [0.1, 0.01, 0.001] {
            let r = flat_counterexample(eps, 3).unwrap();
            assert!(r.pass, "{r:?}");
            assert!((r.curvature * r.psi_gap - 1.0).abs() <= 1e-6);
        }
        assert!(flat_counterexample(0.1, 5).unwrap().pass);
        assert!(flat_counterexample(1.5, 3).is_err());
        assert!(flat_counterexample(0.0, 3).is_err());
    }
}
