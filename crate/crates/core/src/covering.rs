//! Covering constructions over `S1(0)` for `SU(1,1)`.
//!
//! `SL(2,R)` is realized as `SU(1,1)`, so both covers live in the pair model:
//!
//! * the orbit cover `(g, s) -> g l2(s)` from `G x R>0` onto `S1(0)`;
//! * the group cover `(g, s, k) -> g L(s) k^-1` onto `pi^-1(S1(0))`, with
//!   `L(s) = exp(i s C') exp(i A2)` the lifted slice and `k = diag(1/lambda, lambda)`.
//!
//! Preimages are found by multi-start Gauss-Newton in local coordinates, and
//! the fiber count is the number of distinct converged solutions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levi::{chart_at, chart_coords, Chart};
use crate::lie_core::{expm, real_form_basis, standard_generators, GroupSpec, GrpElement, LieAlgebra, Realness};
use crate::linalg::*;
use crate::models::{act_matrix, ModelPoint};
use crate::orbits::{classify_label, domain_contains, DomainId, OrbitLabel};
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CoverVariant {
    OrbitCover,
    GroupCover,
}

impl std::str::FromStr for CoverVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orbitCover" | "orbit" => Ok(CoverVariant::OrbitCover),
            "groupCover" | "group" => Ok(CoverVariant::GroupCover),
            other => Err(Error::SpecMismatch(format!("unknown cover variant {other}"))),
        }
    }
}

/// A point of `G x R>0` or, with `lambda`, of `G x R>0 x K^C`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverPoint {
    pub g: GrpElement,
    pub s: f64,
    /// `k = diag(1/lambda, lambda)`.
    pub lambda: Option<C64>,
}

impl CoverPoint {
    pub fn new(g: GrpElement, s: f64, lambda: Option<C64>) -> Result<Self> {
        if g.spec != su11() || g.realness != Realness::RealForm {
            return Err(Error::SpecMismatch("g must be a real-form element of SU(1,1)".into()));
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::ParamOutOfDomain { what: "cover s".into(), param: s });
        }
        if let Some(l) = lambda {
            if !(l.norm() > 0.0 && l.norm().is_finite()) {
                return Err(Error::ParamOutOfDomain { what: "cover |lambda|".into(), param: l.norm() });
            }
        }
        Ok(CoverPoint { g, s, lambda })
    }

    pub fn k(&self) -> Option<CMat> {
        self.lambda.map(torus)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoverImage {
    Point(ModelPoint),
    Element(GrpElement),
}

pub fn su11() -> GroupSpec {
    GroupSpec::su(1).expect("SU(1,1)")
}

fn torus(lambda: C64) -> CMat {
    CMat::from_row_slice(2, 2, &[cr(1.0) / lambda, cr(0.0), cr(0.0), lambda])
}

/// `([0:1], [0:1])`, the point fixed by `K^C`.
pub fn base_point() -> ModelPoint {
    let e = CVec::from_vec(vec![cr(0.0), cr(1.0)]);
    ModelPoint::pair(su11(), e.clone(), e).expect("base point")
}

/// Projection `G^C -> G^C / K^C`.
pub fn project(m: &CMat) -> ModelPoint {
    act_matrix(su11(), m, &base_point())
}

/// `exp(i s C') exp(i A2)`, a lift of `l2(s)` to `SL(2, C)`.
pub fn lifted_slice(s: f64) -> Result<CMat> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::ParamOutOfDomain { what: "lifted slice".into(), param: s });
    }
    Ok(lifted_slice_unchecked(s))
}

fn lifted_slice_unchecked(s: f64) -> CMat {
    let gens = standard_generators(su11());
    let cp = gens.c_prime.expect("SU carries C'");
    expm(&(cp * c(0.0, s))) * expm(&(gens.a2 * c(0.0, 1.0)))
}

pub fn covering_map(p: &CoverPoint, variant: CoverVariant) -> Result<CoverImage> {
    let l = lifted_slice(p.s)?;
    match variant {
        CoverVariant::OrbitCover => Ok(CoverImage::Point(project(&(&p.g.m * l)))),
        CoverVariant::GroupCover => {
            let k = p.k().ok_or_else(|| Error::SpecMismatch("group cover needs lambda".into()))?;
            let kinv = k.try_inverse().expect("torus element");
            Ok(CoverImage::Element(GrpElement {
                spec: su11(),
                m: &p.g.m * l * kinv,
                realness: Realness::Complexified,
            }))
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Preimage {
    pub g: Vec<[f64; 2]>,
    pub s: f64,
    pub lambda: Option<[f64; 2]>,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiberReport {
    pub variant: CoverVariant,
    pub fiber_count: usize,
    pub preimages: Vec<Preimage>,
    /// Real rank of the differential at each preimage.
    pub jacobian_ranks: Vec<usize>,
    /// Real dimension of the source.
    pub source_dim: usize,
}

/// Unknowns: `g = g0 exp(sum x_i X_i)`, then `s`, then `mu` with `lambda = exp(mu)`.
#[derive(Clone)]
struct Param {
    g0: CMat,
    x: RVec,
}

fn basis() -> Vec<CMat> {
    real_form_basis(su11())
}

impl Param {
    fn g(&self, b: &[CMat]) -> CMat {
        let mut y = CMat::zeros(2, 2);
        for (i, bi) in b.iter().enumerate() {
            y += bi * cr(self.x[i]);
        }
        &self.g0 * expm(&y)
    }
}

/// The map in real coordinates of the target.
fn eval(variant: CoverVariant, chart: Option<&Chart>, b: &[CMat], p: &Param) -> RVec {
    let g = p.g(b);
    let s = p.x[3];
    let l = lifted_slice_unchecked(s);
    match variant {
        CoverVariant::OrbitCover => {
            let q = project(&(g * l));
            realify_vec(&chart_coords(chart.expect("orbit cover uses a chart"), &q))
        }
        CoverVariant::GroupCover => {
            let mu = c(p.x[4], p.x[5]);
            let kinv = torus(cr(1.0) / mu.exp());
            flatten_mat(&(g * l * kinv))
        }
    }
}

fn jacobian(variant: CoverVariant, chart: Option<&Chart>, b: &[CMat], p: &Param) -> RMat {
    let h = 1e-6;
    let m = eval(variant, chart, b, p).len();
    let d = p.x.len();
    let mut j = RMat::zeros(m, d);
    for k in 0..d {
        let mut pp = p.clone();
        let mut pm = p.clone();
        pp.x[k] += h;
        pm.x[k] -= h;
        let col = (eval(variant, chart, b, &pp) - eval(variant, chart, b, &pm)) / (2.0 * h);
        j.set_column(k, &col);
    }
    j
}

/// Re-centres the group parameters on `g0` so the local coordinates stay small.
fn recentre(b: &[CMat], p: &mut Param) {
    p.g0 = p.g(b);
    for i in 0..3 {
        p.x[i] = 0.0;
    }
}

fn newton(variant: CoverVariant, chart: Option<&Chart>, b: &[CMat], target: &RVec, mut p: Param) -> Option<(Param, f64)> {
    let mut r = eval(variant, chart, b, &p) - target;
    let mut rn = r.norm();
    for _ in 0..80 {
        if rn < 1e-13 {
            break;
        }
        let j = jacobian(variant, chart, b, &p);
        let step = lstsq_real(&j, &(-&r));
        let mut t = 1.0;
        let mut improved = false;
        while t > 1e-6 {
            let mut cand = p.clone();
            cand.x += &step * t;
            let sane = cand.x.iter().all(|v| v.is_finite()) && cand.x[3] < 12.0 && cand.x.amax() < 20.0;
            if sane && cand.x[3] > 0.0 && frob(&cand.g(b)) < 1e4 {
                let rc = eval(variant, chart, b, &cand) - target;
                if rc.norm() < rn {
                    p = cand;
                    r = rc;
                    rn = r.norm();
                    improved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
        recentre(b, &mut p);
    }
    (rn < 1e-10).then_some((p, rn))
}

fn target_of(variant: CoverVariant, target: &CoverImage) -> Result<(Option<Chart>, RVec, ModelPoint)> {
    match (variant, target) {
        (CoverVariant::OrbitCover, CoverImage::Point(q)) => {
            if q.spec != su11() {
                return Err(Error::SpecMismatch("orbit cover targets live in SU(1,1)".into()));
            }
            let ch = chart_at(q);
            let v = realify_vec(&chart_coords(&ch, q));
            Ok((Some(ch), v, q.clone()))
        }
        (CoverVariant::GroupCover, CoverImage::Element(g)) => {
            if g.spec != su11() || (g.m.determinant() - cr(1.0)).norm() > 1e-9 {
                return Err(Error::SpecMismatch("group cover targets are elements of SL(2,C)".into()));
            }
            Ok((None, flatten_mat(&g.m), project(&g.m)))
        }
        _ => Err(Error::SpecMismatch("target type does not match the variant".into())),
    }
}

/// Enumerates the preimages of `target` by multi-start Gauss-Newton.
pub fn fiber_cardinality(target: &CoverImage, variant: CoverVariant, starts: usize, rng: &mut Rng) -> Result<FiberReport> {
    let (chart, tv, base) = target_of(variant, target)?;
    let spec = su11();
    if !domain_contains(spec, &DomainId::S1(0.0), &base)? {
        return Err(Error::TargetNotInImage);
    }
    let s0 = match classify_label(spec, &base)? {
        OrbitLabel::Principal { slice: 2, param } => param,
        _ => return Err(Error::TargetNotInImage),
    };
    let b = basis();
    let alg = LieAlgebra::new(spec);
    let dim = match variant {
        CoverVariant::OrbitCover => 4,
        CoverVariant::GroupCover => 6,
    };
    let mut sols: Vec<(Param, f64)> = Vec::new();
    for k in 0..starts.max(2) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let g0 = expm(&alg.random_element(rng, 2.5)) * cr(sign);
        let mut x = RVec::zeros(dim);
        x[3] = s0;
        if dim == 6 {
            x[4] = rand::Rng::gen_range(rng, -1.0..1.0);
            x[5] = rand::Rng::gen_range(rng, -3.0..3.0);
        }
        let Some((p, res)) = newton(variant, chart.as_ref(), &b, &tv, Param { g0, x }) else { continue };
        let g = p.g(&b);
        let lam = (dim == 6).then(|| c(p.x[4], p.x[5]).exp());
        let dup = sols.iter().any(|(q, _)| {
            let same_l = match lam {
                Some(l) => (c(q.x[4], q.x[5]).exp() - l).norm() < 1e-6,
                None => true,
            };
            frob(&(q.g(&b) - &g)) < 1e-6 && (q.x[3] - p.x[3]).abs() < 1e-6 && same_l
        });
        if !dup {
            sols.push((p, res));
        }
    }
    if sols.is_empty() {
        return Err(Error::TargetNotInImage);
    }
    let mut preimages = Vec::new();
    let mut ranks = Vec::new();
    for (p, res) in &sols {
        let g = p.g(&b);
        ranks.push(rank_real(&jacobian(variant, chart.as_ref(), &b, p), 1e-7));
        preimages.push(Preimage {
            g: g.iter().map(|z| [z.re, z.im]).collect(),
            s: p.x[3],
            lambda: (dim == 6).then(|| {
                let l = c(p.x[4], p.x[5]).exp();
                [l.re, l.im]
            }),
            residual: *res,
        });
    }
    Ok(FiberReport { variant, fiber_count: sols.len(), preimages, jacobian_ranks: ranks, source_dim: dim })
}

/// `M(u,v) = [[1, 1/(u-v)], [v, u/(u-v)]]`, optionally times `diag(1/lambda, lambda)`.
pub fn section_and_trivialization(u: C64, v: C64, lambda: Option<C64>) -> Result<GrpElement> {
    if u.norm() >= 1.0 || v.norm() >= 1.0 {
        return Err(Error::OutOfDomain);
    }
    let d = u - v;
    if d.norm() < 1e-14 {
        return Err(Error::DiagonalDegenerate);
    }
    let m = CMat::from_row_slice(2, 2, &[cr(1.0), cr(1.0) / d, v, u / d]);
    let m = match lambda {
        Some(l) if l.norm() == 0.0 => {
            return Err(Error::ParamOutOfDomain { what: "trivialization lambda".into(), param: 0.0 });
        }
        Some(l) => m * torus(l),
        None => m,
    };
    Ok(GrpElement { spec: su11(), m, realness: Realness::Complexified })
}

/// `([1:u], [conj v : 1])`, the point indexed by `(u, v)`.
pub fn indexed_point(u: C64, v: C64) -> Result<ModelPoint> {
    ModelPoint::pair(su11(), CVec::from_vec(vec![cr(1.0), u]), CVec::from_vec(vec![v.conj(), cr(1.0)]))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SectionCheck {
    pub points: usize,
    pub max_det_error: f64,
    /// Largest chordal distance between `pi(M(u,v))` and the indexed point.
    pub max_base_error: f64,
    /// Points whose image lies outside the tested domain.
    pub outside: usize,
}

/// `n` points spread over the open unit disc.
pub fn disc_grid(n: usize) -> Vec<C64> {
    (0..n)
        .map(|k| {
            let r = 0.05 + 0.9 * k as f64 / (n.max(2) - 1) as f64;
            C64::from_polar(r, 2.399963229728653 * k as f64)
        })
        .collect()
}

/// Checks the section on `grid x grid` minus the diagonal.
///
/// The indexed points have `<z,z> > 0 > <w,w>`, which is the sign pattern
/// of `S2(0)` in this labelling, so membership is tested there.
pub fn check_section(grid: &[C64], lambda: Option<C64>) -> Result<SectionCheck> {
    let spec = su11();
    let mut out = SectionCheck { points: 0, max_det_error: 0.0, max_base_error: 0.0, outside: 0 };
    for &u in grid {
        for &v in grid {
            if (u - v).norm() < 1e-14 {
                continue;
            }
            let m = section_and_trivialization(u, v, lambda)?;
            out.points += 1;
            out.max_det_error = out.max_det_error.max((m.m.determinant() - cr(1.0)).norm());
            let q = project(&m.m);
            out.max_base_error = out.max_base_error.max(q.distance(&indexed_point(u, v)?));
            if !domain_contains(spec, &DomainId::S2(0.0), &q)? {
                out.outside += 1;
            }
        }
    }
    Ok(out)
}

/// Full-rank check of the orbit cover at `(g, s)` using an explicit chart.
pub fn orbit_cover_rank(p: &CoverPoint) -> Result<usize> {
    let CoverImage::Point(q) = covering_map(p, CoverVariant::OrbitCover)? else { unreachable!() };
    let ch = chart_at(&q);
    let b = basis();
    let mut x = RVec::zeros(4);
    x[3] = p.s;
    Ok(rank_real(&jacobian(CoverVariant::OrbitCover, Some(&ch), &b, &Param { g0: p.g.m.clone(), x }), 1e-7))
}

pub fn random_cover_point(rng: &mut Rng, with_lambda: bool) -> CoverPoint {
    use rand::Rng as _;
    let alg = LieAlgebra::new(su11());
    let g = GrpElement { spec: su11(), m: expm(&alg.random_element(rng, 2.0)), realness: Realness::RealForm };
    let s = rng.gen_range(0.1..2.0);
    let lambda = with_lambda.then(|| C64::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(-3.0..3.0)));
    CoverPoint { g, s, lambda }
}
