//! Levi forms of hypersurface orbits.
//!
//! Two engines live here. The numeric one restricts the complex Hessian of
//! the invariant `f` to the kernel of `df` in a holomorphic chart. The
//! algebraic one works at a nilpotent site `x = exp(i X0) z`, builds the
//! complex tangent space from induced vector fields and evaluates the
//! bracket form modulo the complex tangent space.
//!
//! Both report eigenvalues with the same orientation: a positive eigenvalue
//! means the hypersurface is pseudoconvex seen from the side `f < f(p)`.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie_core::{
    bracket, expm, involution_alg_matrix, real_form_basis, restricted_root_decomposition, standard_generators,
    trace_form, AlgElement, Family, GroupSpec, Involution,
};
use crate::linalg::*;
use crate::models::{act_matrix, alg_action_ambient, printed_representative, Coords, ModelPoint, RepKind};
use crate::orbits::{invariant_f, orbit_tangent_rank, project_tangent};
use crate::rng::{seeded, Rng};

pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-8;

pub const ORIENTATION: &str = "positive = pseudoconvex from the side f < f(p)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeviCharacter {
    /// One sign, no zero eigenvalues.
    Definite,
    /// One sign with at least one zero eigenvalue.
    Semidefinite,
    Indefinite,
    IdenticallyZero,
}

impl fmt::Display for LeviCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LeviCharacter::Definite => "definite",
            LeviCharacter::Semidefinite => "semidefinite",
            LeviCharacter::Indefinite => "indefinite",
            LeviCharacter::IdenticallyZero => "identically-zero",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeviSignature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
    pub character: LeviCharacter,
    pub orientation: String,
    /// Oriented eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
}

impl LeviSignature {
    /// Counts eigenvalues with `|e| < threshold` as zero.
    pub fn from_eigenvalues(mut ev: Vec<f64>, threshold: f64) -> Self {
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let pos = ev.iter().filter(|&&e| e >= threshold).count();
        let neg = ev.iter().filter(|&&e| e <= -threshold).count();
        let zero = ev.len() - pos - neg;
        let character = match (pos > 0, neg > 0) {
            (true, true) => LeviCharacter::Indefinite,
            (false, false) => LeviCharacter::IdenticallyZero,
            _ if zero == 0 => LeviCharacter::Definite,
            _ => LeviCharacter::Semidefinite,
        };
        LeviSignature { pos, neg, zero, character, orientation: ORIENTATION.to_string(), eigenvalues: ev }
    }

    pub fn triple(&self) -> (usize, usize, usize) {
        (self.pos, self.neg, self.zero)
    }

    /// Nonzero and of one sign: the values `L(Z,Z)` fill a half-line.
    pub fn is_one_signed(&self) -> bool {
        matches!(self.character, LeviCharacter::Definite | LeviCharacter::Semidefinite)
    }

    /// Semidefinite in the weak sense, including the zero form.
    pub fn is_weakly_semidefinite(&self) -> bool {
        self.character != LeviCharacter::Indefinite
    }

    pub fn is_pseudoconvex_below(&self) -> bool {
        self.neg == 0
    }

    pub fn is_pseudoconvex_above(&self) -> bool {
        self.pos == 0
    }

    /// Signature of the opposite orientation (domain on the side `f > f(p)`).
    pub fn flipped(&self) -> LeviSignature {
        let ev: Vec<f64> = self.eigenvalues.iter().map(|e| -e).collect();
        let mut out = self.clone();
        out.pos = self.neg;
        out.neg = self.pos;
        out.eigenvalues = {
            let mut v = ev;
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v
        };
        out.orientation = "positive = pseudoconvex from the side f > f(p)".into();
        out
    }
}

/// Value, holomorphic gradient `df/dzeta_i` and complex Hessian
/// `d^2 f / dzeta_i dconj(zeta_j)`.
#[derive(Debug, Clone)]
pub struct Jet {
    pub value: f64,
    pub grad: CVec,
    pub hess: CMat,
}

/// Jet of `f` in the holomorphic ambient coordinates of `p`
/// (`xi` on the quadric, `(z, conj w)` for pairs, with the stored scaling).
pub fn ambient_jet(spec: GroupSpec, p: &ModelPoint) -> Result<Jet> {
    let n1 = spec.size();
    let e: Vec<f64> = (0..n1).map(|i| if i + 1 == n1 { -1.0 } else { 1.0 }).collect();
    match &p.coords {
        Coords::Quadric(xi) => {
            let value = (0..n1).map(|i| e[i] * xi[i].norm_sqr()).sum::<f64>() - 1.0;
            let grad = CVec::from_fn(n1, |i, _| xi[i].conj() * e[i]);
            let hess = CMat::from_fn(n1, n1, |i, j| if i == j { cr(e[i]) } else { cr(0.0) });
            Ok(Jet { value, grad, hess })
        }
        Coords::Pair { z, w } => {
            let wt = conj_vec(w);
            let m = 2 * n1;
            let h1: f64 = (0..n1).map(|i| e[i] * z[i].norm_sqr()).sum();
            let h2: f64 = (0..n1).map(|i| e[i] * wt[i].norm_sqr()).sum();
            let pp: C64 = (0..n1).map(|i| z[i] * wt[i] * e[i]).sum();
            let d = pp.norm_sqr();
            let scale = vnorm(z) * vnorm(&wt);
            if d.sqrt() < 1e-12 * scale {
                return Err(Error::IncidenceDivisor);
            }
            let dh1 = CVec::from_fn(m, |i, _| if i < n1 { z[i].conj() * e[i] } else { cr(0.0) });
            let dh2 = CVec::from_fn(m, |i, _| if i >= n1 { wt[i - n1].conj() * e[i - n1] } else { cr(0.0) });
            let dp = CVec::from_fn(m, |i, _| if i < n1 { wt[i] * e[i] } else { z[i - n1] * e[i - n1] });
            let hh1 = CMat::from_fn(m, m, |i, j| if i == j && i < n1 { cr(e[i]) } else { cr(0.0) });
            let hh2 = CMat::from_fn(m, m, |i, j| if i == j && i >= n1 { cr(e[i - n1]) } else { cr(0.0) });
            let outer = |a: &CVec, b: &CVec| CMat::from_fn(m, m, |i, j| a[i] * b[j].conj());
            let nn = h1 * h2;
            let dn = &dh1 * cr(h2) + &dh2 * cr(h1);
            let hn = &hh1 * cr(h2) + outer(&dh1, &dh2) + outer(&dh2, &dh1) + &hh2 * cr(h1);
            let dd = &dp * pp.conj();
            let hd = outer(&dp, &dp);
            let dg = &dn / cr(d) - &dd * cr(nn / (d * d));
            let hg = &hn / cr(d) - (outer(&dn, &dd) + outer(&dd, &dn)) / cr(d * d) - &hd * cr(nn / (d * d))
                + outer(&dd, &dd) * cr(2.0 * nn / (d * d * d));
            Ok(Jet { value: -nn / d, grad: -dg, hess: -hg })
        }
    }
}

/// A local holomorphic chart around a model point.
#[derive(Debug, Clone, PartialEq)]
pub enum Chart {
    /// Graph over all quadric coordinates except `pivot`; `base` picks the square-root branch.
    Graph { pivot: usize, base: C64 },
    /// `z_p = 1` and `conj(w)_q = 1`.
    Affine { p: usize, q: usize },
}

fn argmax_modulus(v: &CVec) -> usize {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].norm() > v[best].norm() {
            best = i;
        }
    }
    best
}

/// The best-conditioned chart at `p`.
pub fn chart_at(p: &ModelPoint) -> Chart {
    match &p.coords {
        Coords::Quadric(xi) => {
            let pivot = argmax_modulus(xi);
            Chart::Graph { pivot, base: xi[pivot] }
        }
        Coords::Pair { z, w } => Chart::Affine { p: argmax_modulus(z), q: argmax_modulus(w) },
    }
}

/// Chart coordinates of `p`.
pub fn chart_coords(chart: &Chart, p: &ModelPoint) -> CVec {
    match (chart, &p.coords) {
        (Chart::Graph { pivot, .. }, Coords::Quadric(xi)) => {
            CVec::from_iterator(xi.len() - 1, (0..xi.len()).filter(|i| i != pivot).map(|i| xi[i]))
        }
        (Chart::Affine { p: pz, q: qw }, Coords::Pair { z, w }) => {
            let wt = conj_vec(w);
            let zn = z / z[*pz];
            let wn = &wt / wt[*qw];
            let n1 = z.len();
            let mut out = Vec::with_capacity(2 * n1 - 2);
            out.extend((0..n1).filter(|i| i != pz).map(|i| zn[i]));
            out.extend((0..n1).filter(|i| i != qw).map(|i| wn[i]));
            CVec::from_vec(out)
        }
        _ => panic!("chart does not match the model"),
    }
}

/// Model point with the given chart coordinates.
pub fn chart_embed(spec: GroupSpec, chart: &Chart, u: &CVec) -> ModelPoint {
    let n1 = spec.size();
    let eps = |i: usize| if i + 1 == n1 { -1.0 } else { 1.0 };
    match chart {
        Chart::Graph { pivot, base } => {
            let mut xi = CVec::zeros(n1);
            let mut acc = cr(1.0);
            let mut k = 0;
            for i in 0..n1 {
                if i == *pivot {
                    continue;
                }
                xi[i] = u[k];
                acc += u[k] * u[k] * eps(i);
                k += 1;
            }
            let r = (-acc * eps(*pivot)).sqrt();
            xi[*pivot] = if (r - base).norm() <= (-r - base).norm() { r } else { -r };
            ModelPoint { spec, coords: Coords::Quadric(xi) }
        }
        Chart::Affine { p, q } => {
            let mut z = CVec::zeros(n1);
            let mut wt = CVec::zeros(n1);
            let mut k = 0;
            for i in 0..n1 {
                if i == *p {
                    z[i] = cr(1.0);
                } else {
                    z[i] = u[k];
                    k += 1;
                }
            }
            for i in 0..n1 {
                if i == *q {
                    wt[i] = cr(1.0);
                } else {
                    wt[i] = u[k];
                    k += 1;
                }
            }
            ModelPoint { spec, coords: Coords::Pair { z, w: conj_vec(&wt) } }
        }
    }
}

/// Jet of `f` in chart coordinates.
#[derive(Debug, Clone)]
pub struct ChartJet {
    pub chart: Chart,
    pub coords: CVec,
    pub jet: Jet,
}

/// Analytic complex Hessian of `f` at `p` in the chart chosen by [`chart_at`].
pub fn complex_hessian(spec: GroupSpec, p: &ModelPoint) -> Result<ChartJet> {
    let chart = chart_at(p);
    let coords = chart_coords(&chart, p);
    let n1 = spec.size();
    let jet = match &chart {
        Chart::Graph { pivot, .. } => {
            let xi = p.xi().expect("quadric point");
            let amb = ambient_jet(spec, p)?;
            let eps = |i: usize| if i + 1 == n1 { -1.0 } else { 1.0 };
            let mut j = CMat::zeros(n1, n1 - 1);
            let mut k = 0;
            for i in 0..n1 {
                if i == *pivot {
                    continue;
                }
                j[(i, k)] = cr(1.0);
                j[(*pivot, k)] = -(xi[i] / xi[*pivot]) * (eps(i) * eps(*pivot));
                k += 1;
            }
            let grad = j.transpose() * &amb.grad;
            let hess = j.transpose() * &amb.hess * conj_mat(&j);
            Jet { value: amb.value, grad, hess }
        }
        Chart::Affine { p: pz, q: qw } => {
            let normal = chart_embed(spec, &chart, &coords);
            let amb = ambient_jet(spec, &normal)?;
            let keep: Vec<usize> =
                (0..n1).filter(|i| i != pz).chain((0..n1).filter(|i| i != qw).map(|i| i + n1)).collect();
            let m = keep.len();
            let grad = CVec::from_fn(m, |a, _| amb.grad[keep[a]]);
            let hess = CMat::from_fn(m, m, |a, b| amb.hess[(keep[a], keep[b])]);
            Jet { value: amb.value, grad, hess }
        }
    };
    Ok(ChartJet { chart, coords, jet })
}

/// Central-difference complex Hessian of `f` in the given chart.
pub fn fd_complex_hessian(spec: GroupSpec, chart: &Chart, u0: &CVec, h: f64) -> Result<CMat> {
    let m = u0.len();
    let f = |u: &CVec| invariant_f(&chart_embed(spec, chart, u));
    // Real directions: index < m moves Re u_k, index >= m moves Im u_k.
    let dir = |k: usize| {
        let mut d = CVec::zeros(m);
        if k < m {
            d[k] = cr(1.0);
        } else {
            d[k - m] = I;
        }
        d
    };
    let mut second = RMat::zeros(2 * m, 2 * m);
    let f0 = f(u0)?;
    for a in 0..2 * m {
        let da = dir(a) * cr(h);
        for b in a..2 * m {
            let val = if a == b {
                (f(&(u0 + &da))? - 2.0 * f0 + f(&(u0 - &da))?) / (h * h)
            } else {
                let db = dir(b) * cr(h);
                (f(&(u0 + &da + &db))? - f(&(u0 + &da - &db))? - f(&(u0 - &da + &db))? + f(&(u0 - &da - &db))?)
                    / (4.0 * h * h)
            };
            second[(a, b)] = val;
            second[(b, a)] = val;
        }
    }
    Ok(CMat::from_fn(m, m, |a, b| {
        c(
            0.25 * (second[(a, b)] + second[(a + m, b + m)]),
            0.25 * (second[(a, b + m)] - second[(a + m, b)]),
        )
    }))
}

/// Levi eigenvalues of the level set of `f` through `p` (numeric engine).
pub fn numeric_levi_signature(spec: GroupSpec, p: &ModelPoint) -> Result<LeviSignature> {
    numeric_levi_signature_with(spec, p, DEFAULT_ZERO_THRESHOLD)
}

pub fn numeric_levi_signature_with(spec: GroupSpec, p: &ModelPoint, zero_threshold: f64) -> Result<LeviSignature> {
    if p.spec != spec {
        return Err(Error::SpecMismatch(format!("{} point for {}", p.spec.label(), spec.label())));
    }
    let expected = spec.real_dim() - 1;
    let rank = orbit_tangent_rank(spec, p);
    if rank != expected {
        return Err(Error::NotHypersurface { rank, expected });
    }
    let cj = complex_hessian(spec, p)?;
    let h = levi_matrix_from_jet(&cj.jet)?;
    let thr = zero_threshold * spectral_norm(&cj.jet.hess).max(1.0);
    Ok(LeviSignature::from_eigenvalues(hermitian_eigenvalues(&h), thr))
}

/// `Q^T H conj(Q)` with `Q` an orthonormal basis of `ker df`.
pub fn levi_matrix_from_jet(jet: &Jet) -> Result<CMat> {
    let scale = spectral_norm(&jet.hess).max(1.0);
    if vnorm(&jet.grad) < 1e-10 * scale {
        return Err(Error::DegenerateGradient);
    }
    let row = CMat::from_fn(1, jet.grad.len(), |_, j| jet.grad[j]);
    let q = null_space_complex(&row, 1e-10);
    Ok(q.transpose() * &jet.hess * conj_mat(&q))
}

// ---------------------------------------------------------------------------
// Nilpotent sites and the bracket engine.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SiteCase {
    #[serde(rename = "Reduced_x0")]
    ReducedX0,
    #[serde(rename = "Reduced_y0")]
    ReducedY0,
    /// The site on the orbit `w5`.
    #[serde(rename = "NonReduced_z3_x")]
    NonReducedZ3X,
    #[serde(rename = "NonReduced_z2_x0")]
    NonReducedZ2X0,
    #[serde(rename = "NonReduced_z2_y0")]
    NonReducedZ2Y0,
}

impl SiteCase {
    pub const ALL: [SiteCase; 5] =
        [SiteCase::ReducedX0, SiteCase::ReducedY0, SiteCase::NonReducedZ3X, SiteCase::NonReducedZ2X0, SiteCase::NonReducedZ2Y0];

    fn sign(self) -> f64 {
        match self {
            SiteCase::ReducedY0 | SiteCase::NonReducedZ2Y0 => -1.0,
            _ => 1.0,
        }
    }
}

impl fmt::Display for SiteCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SiteCase::ReducedX0 => "Reduced_x0",
            SiteCase::ReducedY0 => "Reduced_y0",
            SiteCase::NonReducedZ3X => "NonReduced_z3_x",
            SiteCase::NonReducedZ2X0 => "NonReduced_z2_x0",
            SiteCase::NonReducedZ2Y0 => "NonReduced_z2_y0",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for SiteCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SiteCase::ALL
            .iter()
            .copied()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::SiteUnsupported(s.to_string()))
    }
}

/// `x = exp(i s X0) exp(i A_z) z1` together with the data used to build it.
#[derive(Debug, Clone)]
pub struct NilpotentSite {
    pub spec: GroupSpec,
    pub case: SiteCase,
    /// Root vector `X` with `[A, X] = 2X`, `A = [theta X, X]`.
    pub x: CMat,
    pub a: CMat,
    /// `X0 = (A - (X + theta X)) / 2`.
    pub x0: CMat,
    pub a_z: CMat,
    /// `exp(i s X0)`, with `s = +1` at `x` sites and `-1` at `y` sites.
    pub nil_exp: CMat,
    /// `exp(i s X0) exp(i A_z)`.
    pub g_x: CMat,
    /// The singular point `z = exp(i A_z) z1`.
    pub base: ModelPoint,
    pub point: ModelPoint,
}

fn theta(spec: GroupSpec, x: &CMat) -> CMat {
    involution_alg_matrix(spec, Involution::Theta, x)
}

pub fn build_site(spec: GroupSpec, case: SiteCase) -> Result<NilpotentSite> {
    let unsupported = || Error::SiteUnsupported(format!("{case} for {}", spec.label()));
    let (label, az_factor) = match (spec.family, case) {
        (Family::SO0, SiteCase::ReducedX0 | SiteCase::ReducedY0) => (1i8, PI / 2.0),
        (Family::SU, SiteCase::NonReducedZ2X0 | SiteCase::NonReducedZ2Y0) => (2, PI / 4.0),
        (Family::SU, SiteCase::NonReducedZ3X) if spec.n >= 2 => (1, PI / 2.0),
        _ => return Err(unsupported()),
    };
    let gens = standard_generators(spec);
    let decomp = restricted_root_decomposition(spec, &AlgElement::real(spec, gens.a0.clone()))?;
    let mut x = decomp.space(label).first().cloned().ok_or_else(unsupported)?;
    let a = bracket(&theta(spec, &x), &x);
    let ax = bracket(&a, &x);
    let cval = (x.dotc(&ax) / x.dotc(&x)).re;
    if !(cval > 0.0) {
        return Err(Error::Numerical(format!("root vector normalization {cval}")));
    }
    x *= cr((2.0 / cval).sqrt());
    let a = bracket(&theta(spec, &x), &x);
    let x0 = (&a - (&x + theta(spec, &x))) * cr(0.5);
    let a_z = &gens.a0 * cr(az_factor);
    let ez = expm(&(&a_z * I));
    let nil_exp = expm(&(&x0 * (I * case.sign())));
    let g_x = &nil_exp * &ez;
    let z1 = printed_representative(spec, RepKind::Z1)?;
    let base = act_matrix(spec, &ez, &z1);
    let point = act_matrix(spec, &g_x, &z1);
    Ok(NilpotentSite { spec, case, x, a, x0, a_z, nil_exp, g_x, base, point })
}

/// Induced tangent vector `X*` at `p` in ambient coordinates (scalings removed).
pub fn induced_vector(spec: GroupSpec, p: &ModelPoint, x: &CMat) -> CVec {
    project_tangent(p, &alg_action_ambient(spec, x, p))
}

/// `X*` at the site point.
pub fn tangent_star(site: &NilpotentSite, x: &CMat) -> CVec {
    induced_vector(site.spec, &site.point, x)
}

/// `Ad Y` by `exp(i s X0)`, the transport from the singular point to the site.
pub fn ad_site(site: &NilpotentSite, y: &CMat) -> CMat {
    let inv = site.nil_exp.clone().try_inverse().expect("site matrix invertible");
    &site.nil_exp * y * inv
}

/// Raw output of the bracket engine.
#[derive(Debug, Clone)]
pub struct AlgebraicLevi {
    /// Levi matrix against the normal generator `(Ad_x theta X0)*`.
    pub h: CMat,
    /// `+1` or `-1`: multiply eigenvalues of `h` by this to get the common orientation.
    pub orientation_sign: f64,
    pub tangent_rank: usize,
    pub hermitian_defect: f64,
}

struct Engine<'a> {
    spec: GroupSpec,
    p: &'a ModelPoint,
    basis: Vec<CMat>,
    t: RMat,
    ker: RMat,
    q: CMat,
    bm: RMat,
}

impl<'a> Engine<'a> {
    fn act(&self, y: &CMat) -> CVec {
        induced_vector(self.spec, self.p, y)
    }

    fn pre(&self, v: &CVec, rng: &mut Rng) -> CMat {
        let mut coef = lstsq_real(&self.t, &realify_vec(v));
        if self.ker.ncols() > 0 {
            let r = RVec::from_fn(self.ker.ncols(), |_, _| rng.gen_range(-1.0..1.0));
            coef += &self.ker * r;
        }
        let mut m = CMat::zeros(self.spec.size(), self.spec.size());
        for (k, b) in self.basis.iter().enumerate() {
            m += b * cr(coef[k]);
        }
        m
    }

    fn normal_coef(&self, v: &CVec) -> Result<f64> {
        let rv = realify_vec(v);
        let sol = lstsq_real(&self.bm, &rv);
        let res = (&self.bm * &sol - &rv).norm();
        if res > 1e-7 * (1.0 + rv.norm()) {
            return Err(Error::Numerical(format!("bracket leaves the tangent space (residual {res:e})")));
        }
        Ok(sol[sol.len() - 1])
    }
}

/// Bracket-engine Levi matrix at the site, using `rng` for the preimage kernel component.
pub fn algebraic_levi_matrix(site: &NilpotentSite, rng: &mut Rng) -> Result<AlgebraicLevi> {
    let spec = site.spec;
    let p = &site.point;
    let basis = real_form_basis(spec);
    let cols: Vec<RVec> = basis.iter().map(|b| realify_vec(&induced_vector(spec, p, b))).collect();
    let t = RMat::from_columns(&cols);
    let v = range_real(&t, 1e-9);
    let rank = v.ncols();
    let half = v.nrows() / 2;
    let iv_cols: Vec<RVec> = (0..rank).map(|k| realify_vec(&(complexify_vec(&v.column(k).into_owned()) * I))).collect();
    let mut stacked = RMat::zeros(v.nrows(), 2 * rank);
    stacked.view_mut((0, 0), (v.nrows(), rank)).copy_from(&v);
    for k in 0..rank {
        stacked.set_column(rank + k, &(-&iv_cols[k]));
    }
    let k = null_space_real(&stacked, 1e-9);
    let wr = &v * k.rows(0, rank);
    let mcols: Vec<CVec> = (0..wr.ncols()).map(|j| complexify_vec(&wr.column(j).into_owned())).collect();
    let m = if mcols.is_empty() { CMat::zeros(half, 0) } else { CMat::from_columns(&mcols) };
    let q = range_complex(&m, 1e-9);
    let cr_dim = q.ncols();
    let ker = null_space_real(&t, 1e-9);
    let theta_x0 = theta(spec, &site.x0);
    let vn = induced_vector(spec, p, &ad_site(site, &theta_x0));
    let mut bcols: Vec<RVec> = Vec::with_capacity(2 * cr_dim + 1);
    for j in 0..cr_dim {
        bcols.push(realify_vec(&q.column(j).into_owned()));
    }
    for j in 0..cr_dim {
        bcols.push(realify_vec(&(q.column(j).into_owned() * I)));
    }
    bcols.push(realify_vec(&vn));
    let bm = RMat::from_columns(&bcols);
    let eng = Engine { spec, p, basis, t, ker, q, bm };

    let mut h = CMat::zeros(cr_dim, cr_dim);
    let omega = |a: &CVec, b: &CVec, rng: &mut Rng| -> Result<f64> {
        let pa = eng.pre(a, rng);
        let pb = eng.pre(b, rng);
        eng.normal_coef(&eng.act(&bracket(&pa, &pb)))
    };
    for j in 0..cr_dim {
        let qj = eng.q.column(j).into_owned();
        for kk in 0..cr_dim {
            let qk = eng.q.column(kk).into_owned();
            let re = omega(&qj, &(&qk * I), rng)?;
            let im = omega(&qj, &qk, rng)?;
            h[(j, kk)] = c(re, im);
        }
    }
    let jet = ambient_jet(spec, p)?;
    let along = -2.0 * (jet.grad.transpose() * &vn)[(0, 0)].im;
    if along.abs() < 1e-12 {
        return Err(Error::DegenerateGradient);
    }
    let hermitian_defect = frob(&(&h - h.adjoint()));
    Ok(AlgebraicLevi { h, orientation_sign: along.signum(), tangent_rank: rank, hermitian_defect })
}

/// Oriented Levi signature from the bracket engine.
pub fn algebraic_levi_signature(spec: GroupSpec, site: &NilpotentSite) -> Result<LeviSignature> {
    algebraic_levi_signature_with(spec, site, DEFAULT_ZERO_THRESHOLD)
}

pub fn algebraic_levi_signature_with(spec: GroupSpec, site: &NilpotentSite, zero_threshold: f64) -> Result<LeviSignature> {
    if site.spec != spec {
        return Err(Error::SpecMismatch(format!("{} site for {}", site.spec.label(), spec.label())));
    }
    let mut rng = seeded(0);
    let raw = algebraic_levi_matrix(site, &mut rng)?;
    let ev: Vec<f64> = hermitian_eigenvalues(&raw.h).into_iter().map(|e| e * raw.orientation_sign).collect();
    let thr = zero_threshold * spectral_norm(&raw.h).max(1.0);
    Ok(LeviSignature::from_eigenvalues(ev, thr))
}

// ---------------------------------------------------------------------------
// Root data with respect to b = R (X - theta X), split by the involution of z.

/// `b`-eigenspaces split into the isotropy part `h` and its complement `q`.
#[derive(Debug, Clone)]
pub struct SiteRootData {
    pub b: CMat,
    /// `lambda(B)`.
    pub lambda: f64,
    pub h: std::collections::BTreeMap<i8, Vec<CMat>>,
    pub q: std::collections::BTreeMap<i8, Vec<CMat>>,
}

impl SiteRootData {
    pub fn h_space(&self, k: i8) -> &[CMat] {
        self.h.get(&k).map(|v| v.as_slice()).unwrap_or(&[])
    }
    pub fn q_space(&self, k: i8) -> &[CMat] {
        self.q.get(&k).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

/// Involution of `g` fixing the isotropy algebra of `z = exp(i A_z) z1`.
pub fn site_involution(site: &NilpotentSite, y: &CMat) -> CMat {
    let g2 = expm(&(&site.a_z * c(0.0, 2.0)));
    let inv = g2.clone().try_inverse().expect("invertible");
    &g2 * theta(site.spec, y) * inv
}

fn real_span(spec: GroupSpec, mats: &[CMat]) -> Vec<CMat> {
    let alg = crate::lie_core::LieAlgebra::new(spec);
    let cols: Vec<RVec> = mats.iter().map(|m| alg.coords(m)).collect();
    orthonormalize_real(&cols, 1e-8).iter().map(|v| alg.from_coords(v)).collect()
}

pub fn site_root_data(site: &NilpotentSite) -> Result<SiteRootData> {
    let spec = site.spec;
    let b = &site.x - theta(spec, &site.x);
    let decomp = restricted_root_decomposition(spec, &AlgElement::real(spec, b.clone()))?;
    let mut h = std::collections::BTreeMap::new();
    let mut q = std::collections::BTreeMap::new();
    for (&k, space) in &decomp.spaces {
        let plus: Vec<CMat> = space.iter().map(|y| (y + site_involution(site, y)) * cr(0.5)).collect();
        let minus: Vec<CMat> = space.iter().map(|y| (y - site_involution(site, y)) * cr(0.5)).collect();
        h.insert(k, real_span(spec, &plus));
        q.insert(k, real_span(spec, &minus));
    }
    Ok(SiteRootData { b, lambda: decomp.root_value, h, q })
}

/// Normal-line coefficients of `L(F, F)` for random elements of the two
/// blocks of the complex tangent space that carry a sign.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BlockCoefficients {
    /// From `X_{-lambda}` in the complement of `theta X0` inside `g_q^{-lambda}` (expected `>= 0`).
    pub p: Vec<f64>,
    /// From `Z0 = [X0, Y]`, `Y` in `g_h^{-lambda}` (expected `<= 0`).
    pub n: Vec<f64>,
}

fn random_combo(spec: GroupSpec, basis: &[CMat], rng: &mut Rng) -> CMat {
    let mut m = CMat::zeros(spec.size(), spec.size());
    for b in basis {
        m += b * cr(rng.gen_range(-1.0..1.0));
    }
    m
}

/// Trace-form coefficients `p` and `n` for `draws` random elements.
///
/// `p = B(-(1/6)[[X0, X], X], X0) / B(theta X0, X0)` and
/// `n = B(-(1/2)[Y, [X0, Y]], X0) / B(theta X0, X0)`.
pub fn block_coefficients(site: &NilpotentSite, draws: usize, rng: &mut Rng) -> Result<BlockCoefficients> {
    if !matches!(site.case, SiteCase::ReducedX0 | SiteCase::NonReducedZ3X) {
        return Err(Error::SiteUnsupported(format!("block coefficients at {}", site.case)));
    }
    let spec = site.spec;
    let data = site_root_data(site)?;
    let x0 = &site.x0;
    let tx0 = theta(spec, x0);
    let denom = trace_form(&tx0, x0).re;
    let theta_pos = |u: &CMat, v: &CMat| -trace_form(u, &theta(spec, v)).re;
    // Complement of theta X0 in g_q^{-lambda}, orthogonal for -B(., theta .).
    let qneg = data.q_space(-1);
    let nt = theta_pos(&tx0, &tx0);
    let comp: Vec<CMat> = qneg.iter().map(|y| y - &tx0 * cr(theta_pos(y, &tx0) / nt)).collect();
    let comp = real_span(spec, &comp);
    let hneg = data.h_space(-1).to_vec();
    let mut out = BlockCoefficients::default();
    for _ in 0..draws {
        if !comp.is_empty() {
            let xm = random_combo(spec, &comp, rng);
            let inner = bracket(&bracket(x0, &xm), &xm);
            out.p.push(trace_form(&(inner * cr(-1.0 / 6.0)), x0).re / denom);
        }
        if !hneg.is_empty() {
            let y = random_combo(spec, &hneg, rng);
            let z0 = bracket(x0, &y);
            out.n.push(trace_form(&(bracket(&y, &z0) * cr(-0.5)), x0).re / denom);
        }
    }
    Ok(out)
}
