//! The named check registry, its runner and the coverage manifest.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::clifford::{Blade, Multivector, MAX_DIM};
use crate::conformal::{
    dirac_conformal_check, intertwine_pk_check, intertwine_rk_check, kernel_conformal_check, rational_points,
    CheckOutcome, VahlenMatrix, Weight, WeightKind,
};
use crate::error::{Error, Result};
use crate::integral::{self, Quad};
use crate::monogenic::{
    almansi_fischer_split, basis_p_sigma, build_zk, harmonic_spanning_set, orthonormality_matrix,
    projection_pk, reflection_residual,
};
use crate::poly::{MPoly, Monomial, Side, Space};
use crate::rarita::{build_ek, gegenbauer_integral_check, lemma6_check, two_representation_residual, KernelEk, RSFunction};
use crate::scalar::{q, qi, Scalar, ScalarMode, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckConfig {
    pub n: usize,
    pub k: u32,
    /// Overrides the per-check tolerance of numeric checks.
    pub tol: Option<f64>,
    pub quad_order: usize,
    pub seed: u64,
    pub mode: ScalarMode,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { n: 3, k: 1, tol: None, quad_order: 24, seed: 1, mode: ScalarMode::Exact }
    }
}

impl CheckConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_DIM).contains(&self.n) {
            return Err(Error::UnsupportedDimension(self.n));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(Error::Precondition("tolerance must be positive".into()));
            }
        }
        if self.quad_order < 2 {
            return Err(Error::Precondition("quadrature order must be at least 2".into()));
        }
        Ok(())
    }

    pub fn params(&self) -> String {
        format!(
            "n={} k={} quad_order={} seed={} mode={}{}",
            self.n,
            self.k,
            self.quad_order,
            self.seed,
            self.mode,
            self.tol.map(|t| format!(" tol={t:e}")).unwrap_or_default()
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Exact rational identity; residual must vanish.
    Exact,
    /// Quadrature; residual compared with a tolerance.
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Residual {
    ExactZero,
    Value(f64),
    None,
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::ExactZero => f.write_str("exact-zero"),
            Residual::Value(v) => write!(f, "{v:e}"),
            Residual::None => f.write_str("-"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub residual: Residual,
    pub tolerance: Option<f64>,
    pub time_ms: u128,
    pub params: String,
    pub anchor: &'static str,
    /// Offending term, skip reason or remark.
    pub note: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Raw outcome of a check body.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    /// `None` when every compared quantity is exactly zero, otherwise a
    /// description of the first offending one.
    Exact(Option<String>),
    Float(f64),
    Skip(String),
}

/// Tolerance for exact identities evaluated in float mode.
pub const FLOAT_MODE_TOLERANCE: f64 = 1e-9;

type Body = fn(&CheckConfig) -> Result<Outcome>;

pub struct CheckDef {
    pub name: &'static str,
    pub anchor: &'static str,
    pub kind: Kind,
    pub tolerance: f64,
    pub note: Option<&'static str>,
    body: Body,
}

macro_rules! exact {
    ($name:expr, $anchor:expr, $body:expr) => {
        CheckDef { name: $name, anchor: $anchor, kind: Kind::Exact, tolerance: 0.0, note: None, body: $body }
    };
}

macro_rules! numeric {
    ($name:expr, $anchor:expr, $tol:expr, $body:expr) => {
        CheckDef { name: $name, anchor: $anchor, kind: Kind::Numeric, tolerance: $tol, note: None, body: $body }
    };
    ($name:expr, $anchor:expr, $tol:expr, $body:expr, $note:expr) => {
        CheckDef { name: $name, anchor: $anchor, kind: Kind::Numeric, tolerance: $tol, note: Some($note), body: $body }
    };
}

const TK_NOTE: &str = "compactly supported case of borel-pompeiu; psi = (1-|x|^2)^3 p_k(v)";

static REGISTRY: &[CheckDef] = &[
    exact!("dirac-square", "D^2 = -Δ", dirac_square),
    exact!("almansi-fischer", "h_k = p_k + u p_{k-1}", almansi_fischer),
    exact!("projection-formula", "P_k = 1 + u D_u / (n+2k-2)", projection_formula),
    exact!("orthonormality", "(1/ω_n) ∫ V_σ(u) u P_μ(u) dS(u) = δ_{σμ}", orthonormality),
    exact!("reproducing", "p_k(u) = (Z_k(u,v), p_k(v))_v", reproducing),
    exact!("lemma5", "∫ p~_{k-1}(u) u p_k(u) dS(u) = 0", lemma5),
    exact!("lemma6", "(1/ω_n) ∫ h_k(xux) dS(x) = c_k h_k(u), c_k = (n-2)/(n-2+2k)", lemma6),
    numeric!(
        "gegenbauer-integral",
        "∫_0^π P_k^λ(1-2cos^2 θ) sin^{n-2} θ dθ = Γ(1/2)Γ(λ+1/2)/Γ(λ+1) · λ/(λ+k), λ = n/2-1",
        1e-12,
        gegenbauer_integral
    ),
    exact!("rk-annihilates-Zk", "R_k Z_k(u,v) = 0 = Z_k(u,v) R_k", rk_annihilates_zk),
    exact!("ek-left", "R_k E_k(x,u,v) = 0 on R^n \\ {0}", ek_left),
    exact!("ek-right", "E_k(x,u,v) R_k = 0 on R^n \\ {0}", ek_right),
    exact!("fk-two-representations", "x Z_k(xux, v) = Z_k(u, xvx) x", fk_two_representations),
    exact!("zk-reflection", "Z_k(u,v) = -x Z_k(xux, xvx) x / |x|^{4k+2}", zk_reflection),
    exact!("lemma1", "P_{k,w} a~ f(aya~, awa~) = a~ P_{k,u} f(x,u)", lemma1),
    exact!("lemma2", "P_{k,w} (y/|y|^n) f(y^{-1}, ywy/|y|^2) = (y/|y|^n) P_{k,u} f(x,u)", lemma2),
    exact!("lemma3", "P_k f(x,u) = P_k f(y+a,u)", lemma3),
    exact!("lemma4", "P_k f(x,u) = P_k f(λy,u)", lemma4),
    exact!("theorem1", "P_{k,w} J(φ,x) f(φ(x),u) = J(φ,x) P_{k,u} f(φ(x),u)", theorem1),
    exact!("theorem2", "a- R_{k,u} f(x,u) = R_{k,w} a~ f(aya~, awa~)", theorem2),
    exact!("theorem3", "y/|y|^{n+2} R_{k,u} f(x,u) = R_{k,w} (y/|y|^n) f(y^{-1}, ywy/|y|^2)", theorem3),
    exact!("theorem4", "R_{k,x,w} J_1(φ,x) ψ(φ(x),u) = J_{-1}(φ,x) R_{k,y,u} ψ(y,u)", theorem4),
    exact!("kernel-conformal", "E_k(φx-φy,u,v) = δ J(φ,y)^{-1} E_k(x-y,u',v') J~(φ,x)^{-1}", kernel_conformal),
    numeric!("stokes", "∫_{∂Ω} g dσ_x f = ∫_Ω (g D) f + g (D f) dx", 1e-10, stokes),
    numeric!(
        "rs-stokes",
        "∫_{∂Ω} (g dσ_x f)_u = ∫_Ω (g R_k, f)_u + (g, R_k f)_u dx = ∫_{∂Ω} (g, P_k dσ_x f)_u",
        1e-10,
        rs_stokes
    ),
    numeric!("cauchy-theorem", "∫_{∂Ω} (g, P_k dσ_x f)_u = 0", 1e-8, cauchy_theorem),
    numeric!(
        "cauchy-theorem-conformal",
        "∫_{∂Ω} (g(φx,u) J~(φ,x), P_{k,w} dσ_x J(φ,x) f(φx,u))_w = 0",
        1e-8,
        cauchy_theorem_conformal
    ),
    numeric!(
        "borel-pompeiu",
        "f(y,u) = -∫_{∂Ω} (E_k(x-y,u,v), P_k dσ_x f(x,v))_v + ∫_Ω (E_k(x-y,u,v), R_k f(x,v))_v dx",
        1e-4,
        borel_pompeiu
    ),
    numeric!("cif", "f(y,u) = -∫_{∂Ω} (E_k(x-y,u,v), P_k dσ_x f(x,v))_v", 1e-6, cif),
    numeric!(
        "cif-conformal",
        "J(φ,y) f(φy,u) = -∫_{∂Ω} (E_k(x-y,u,v), P_k dσ_x J(φ,x) f(φx,u(x,v)))_v",
        1e-5,
        cif_conformal
    ),
    numeric!("tk-delta", "∫ (E_k(x-y,u,v), R_k ψ(x,v))_v dx = ψ(y,u)", 1e-3, tk_delta, TK_NOTE),
    numeric!(
        "tk-inverse",
        "R_k T_k ψ = ψ, T_k ψ(y,u) = ∫ (E_k(x-y,u,v), ψ(x,v))_v dx",
        1e-3,
        tk_inverse,
        TK_NOTE
    ),
];

pub fn registry() -> &'static [CheckDef] {
    REGISTRY
}

pub fn find(name: &str) -> Option<&'static CheckDef> {
    REGISTRY.iter().find(|c| c.name == name)
}

/// Runs one named check.
pub fn run_check(name: &str, cfg: &CheckConfig) -> Result<CheckResult> {
    let def = find(name).ok_or_else(|| Error::Other(format!("unknown check {name:?}")))?;
    cfg.validate()?;
    let start = Instant::now();
    let outcome = (def.body)(cfg);
    let time_ms = start.elapsed().as_millis();
    let tol = cfg.tol.unwrap_or(match def.kind {
        Kind::Exact => FLOAT_MODE_TOLERANCE,
        Kind::Numeric => def.tolerance,
    });
    let mut note = def.note.map(str::to_string);
    let (status, residual, tolerance) = match outcome {
        Ok(Outcome::Exact(None)) => (Status::Pass, Residual::ExactZero, None),
        Ok(Outcome::Exact(Some(what))) => {
            note = Some(what);
            (Status::Fail, Residual::None, None)
        }
        Ok(Outcome::Float(r)) => {
            let ok = r.is_finite() && r <= tol;
            (if ok { Status::Pass } else { Status::Fail }, Residual::Value(r), Some(tol))
        }
        Ok(Outcome::Skip(reason)) => {
            note = Some(reason);
            (Status::Skipped, Residual::None, None)
        }
        Err(e) => {
            note = Some(format!("error: {e}"));
            (Status::Fail, Residual::None, None)
        }
    };
    Ok(CheckResult {
        name: def.name.to_string(),
        status,
        residual,
        tolerance,
        time_ms,
        params: cfg.params(),
        anchor: def.anchor,
        note,
    })
}

/// Expands `all`, rejects unknown names and runs the checks in parallel;
/// results keep the requested order.
pub fn run_checks(names: &[String], cfg: &CheckConfig) -> Result<Vec<CheckResult>> {
    cfg.validate()?;
    let mut list: Vec<&'static str> = Vec::new();
    for name in names {
        if name == "all" {
            list.extend(REGISTRY.iter().map(|c| c.name));
        } else {
            list.push(find(name).ok_or_else(|| Error::Other(format!("unknown check {name:?}")))?.name);
        }
    }
    let mut seen = std::collections::HashSet::new();
    list.retain(|n| seen.insert(*n));
    list.par_iter().map(|name| run_check(name, cfg)).collect()
}

/// Where each numbered result of the source maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    Check(&'static str),
    OutOfScope(&'static str),
}

pub static MANIFEST: &[(&str, Coverage)] = &[
    ("Lemma 1", Coverage::Check("lemma1")),
    ("Lemma 2", Coverage::Check("lemma2")),
    ("Lemma 3", Coverage::Check("lemma3")),
    ("Lemma 4", Coverage::Check("lemma4")),
    ("Lemma 5", Coverage::Check("lemma5")),
    ("Lemma 6", Coverage::Check("lemma6")),
    ("Theorem 1", Coverage::Check("theorem1")),
    ("Theorem 2", Coverage::Check("theorem2")),
    ("Theorem 3", Coverage::Check("theorem3")),
    ("Theorem 4", Coverage::Check("theorem4")),
    ("Theorem 5", Coverage::Check("stokes")),
    ("Theorem 6", Coverage::Check("rs-stokes")),
    ("Theorem 7", Coverage::Check("borel-pompeiu")),
    ("Theorem 8", Coverage::Check("cif")),
    ("Theorem 9", Coverage::Check("tk-delta")),
    ("Theorem 10", Coverage::Check("tk-inverse")),
    ("Theorem 11", Coverage::Check("kernel-conformal")),
    ("Corollary 1", Coverage::Check("cauchy-theorem")),
    ("Definition 1", Coverage::Check("reproducing")),
    ("Definition 2", Coverage::Check("tk-inverse")),
    (
        "Proposition (cited Gegenbauer integral)",
        Coverage::OutOfScope("external result; exercised only through gegenbauer-integral"),
    ),
];

// ---------------------------------------------------------------------------
// helpers

fn exact_zero<S: Scalar>(label: impl FnOnce() -> String, p: &MPoly<S>) -> Option<String> {
    if p.is_zero() {
        None
    } else {
        let (m, b, c) = p.terms().next().expect("nonzero polynomial has a term");
        Some(format!("{}: nonzero term {:?} {} coeff {:?}", label(), m, b.0, c))
    }
}

fn first_failure(items: impl IntoIterator<Item = Option<String>>) -> Outcome {
    Outcome::Exact(items.into_iter().flatten().next())
}

/// Exact mode returns the first offending term; float mode the largest
/// absolute coefficient over all compared quantities.
fn residual_of<S: Scalar>(parts: Vec<(String, MPoly<S>)>) -> Outcome {
    match S::MODE {
        ScalarMode::Exact => first_failure(parts.into_iter().map(|(l, p)| exact_zero(|| l, &p))),
        ScalarMode::Float => Outcome::Float(parts.iter().map(|(_, p)| p.max_abs()).fold(0.0, f64::max)),
    }
}

fn needs_kernel(cfg: &CheckConfig) -> Option<Outcome> {
    (cfg.n < 3).then(|| Outcome::Skip(format!("kernel checks need n >= 3 (n = {})", cfg.n)))
}

fn exact_only(cfg: &CheckConfig) -> Option<Outcome> {
    needs_kernel(cfg).or_else(|| {
        (cfg.mode == ScalarMode::Float).then(|| Outcome::Skip("exact identity; run with --mode exact".into()))
    })
}

type EkCache = Mutex<HashMap<(usize, u32), Arc<KernelEk>>>;

/// Cached `E_k` for `(n, k)`.
pub fn kernel_ek(n: usize, k: u32) -> Result<Arc<KernelEk>> {
    static CACHE: OnceLock<EkCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(e) = cache.lock().unwrap().get(&(n, k)) {
        return Ok(e.clone());
    }
    let e = Arc::new(build_ek(&*build_zk(n, k)?)?);
    cache.lock().unwrap().insert((n, k), e.clone());
    Ok(e)
}

fn random_multivector<S: Scalar>(rng: &mut ChaCha8Rng, n: usize) -> Multivector<S> {
    let terms: Vec<(Blade, S)> = (0..3)
        .map(|_| (Blade(rng.gen_range(0..(1u16 << n))), S::from_i64(rng.gen_range(-3..=3))))
        .collect();
    Multivector::from_terms(n, terms)
}

fn random_poly<S: Scalar>(rng: &mut ChaCha8Rng, n: usize, space: Space, max_deg: u8) -> MPoly<S> {
    let mut p = MPoly::zero(n);
    for _ in 0..4 {
        let mut m = Monomial::ONE;
        for _ in 0..rng.gen_range(0..=max_deg) {
            let i = rng.gen_range(0..n);
            m.set(space, i, m.get(space, i) + 1);
        }
        p = &p + &MPoly::monomial(m, &random_multivector(rng, n));
    }
    p
}

/// Associativity, reversion/conjugation as anti-automorphisms and
/// `D^2 = -Δ` on `count` seeded random inputs.
pub fn algebra_suite<S: Scalar>(n: usize, count: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts: Vec<(String, MPoly<S>)> = Vec::new();
    for i in 0..count {
        let a = random_multivector::<S>(&mut rng, n);
        let b = random_multivector::<S>(&mut rng, n);
        let c = random_multivector::<S>(&mut rng, n);
        let assoc = &(&(&a * &b) * &c) - &(&a * &(&b * &c));
        let rev = &(&a * &b).reversion() - &(&b.reversion() * &a.reversion());
        let conj = &(&a * &b).conjugation() - &(&b.conjugation() * &a.conjugation());
        let p = random_poly::<S>(&mut rng, n, Space::X, 4);
        let d2 = &p.dirac(Space::X, Side::Left).dirac(Space::X, Side::Left) + &p.laplacian(Space::X);
        let d2r = &p.dirac(Space::X, Side::Right).dirac(Space::X, Side::Right) + &p.laplacian(Space::X);
        parts.push((format!("associativity #{i}"), MPoly::constant(&assoc)));
        parts.push((format!("reversion #{i}"), MPoly::constant(&rev)));
        parts.push((format!("conjugation #{i}"), MPoly::constant(&conj)));
        parts.push((format!("D^2 + Δ #{i}"), d2));
        parts.push((format!("right D^2 + Δ #{i}"), d2r));
    }
    residual_of(parts)
}

fn in_mode(cfg: &CheckConfig, exact: impl FnOnce() -> Result<Outcome>, float: impl FnOnce() -> Result<Outcome>) -> Result<Outcome> {
    match cfg.mode {
        ScalarMode::Exact => exact(),
        ScalarMode::Float => float(),
    }
}

// ---------------------------------------------------------------------------
// algebraic checks

fn dirac_square(cfg: &CheckConfig) -> Result<Outcome> {
    in_mode(
        cfg,
        || Ok(algebra_suite::<Q>(cfg.n, 40, cfg.seed)),
        || Ok(algebra_suite::<f64>(cfg.n, 40, cfg.seed)),
    )
}

/// Split-and-reconstruct over the harmonic spanning set (and right multiples
/// by a bivector), with both parts monogenic.
pub fn almansi_fischer_parts<S: Scalar>(n: usize, k: u32) -> Result<Vec<(String, MPoly<S>)>> {
    let u = MPoly::<S>::vector_var(n, Space::U);
    let biv = Multivector::blade(n, Blade::from_indices(&[0, 1]), S::one());
    let mut parts = Vec::new();
    for (i, h0) in harmonic_spanning_set::<S>(n, k, Space::U)?.into_iter().enumerate() {
        for h in [h0.clone(), &h0 + &h0.right_mul_mv(&biv)] {
            let s = almansi_fischer_split(&h, k)?;
            parts.push((format!("reconstruct #{i}"), &(&s.p_k + &(&u * &s.p_km1)) - &h));
            parts.push((format!("D p_k #{i}"), s.p_k.dirac(Space::U, Side::Left)));
            parts.push((format!("D p_(k-1) #{i}"), s.p_km1.dirac(Space::U, Side::Left)));
        }
    }
    Ok(parts)
}

fn almansi_fischer(cfg: &CheckConfig) -> Result<Outcome> {
    in_mode(
        cfg,
        || Ok(residual_of(almansi_fischer_parts::<Q>(cfg.n, cfg.k)?)),
        || Ok(residual_of(almansi_fischer_parts::<f64>(cfg.n, cfg.k)?)),
    )
}

fn projection_parts<S: Scalar>(n: usize, k: u32) -> Result<Vec<(String, MPoly<S>)>> {
    let u = MPoly::<S>::vector_var(n, Space::U);
    let mut parts = Vec::new();
    for (s, p) in basis_p_sigma::<S>(n, k) {
        parts.push((format!("P_k P_σ - P_σ, σ = {s:?}"), &projection_pk(&p, k)? - &p));
    }
    if k > 0 {
        for (s, p) in basis_p_sigma::<S>(n, k - 1) {
            parts.push((format!("P_k(u P_μ), μ = {s:?}"), projection_pk(&(&u * &p), k)?));
        }
    }
    for (i, h) in harmonic_spanning_set::<S>(n, k, Space::U)?.iter().enumerate() {
        parts.push((format!("D P_k h #{i}"), projection_pk(h, k)?.dirac(Space::U, Side::Left)));
    }
    Ok(parts)
}

fn projection_formula(cfg: &CheckConfig) -> Result<Outcome> {
    in_mode(
        cfg,
        || Ok(residual_of(projection_parts::<Q>(cfg.n, cfg.k)?)),
        || Ok(residual_of(projection_parts::<f64>(cfg.n, cfg.k)?)),
    )
}

fn orthonormality(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = exact_only(cfg) {
        return Ok(s);
    }
    let m = orthonormality_matrix(cfg.n, cfg.k)?;
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let expected = if i == j { Multivector::one(cfg.n) } else { Multivector::zero(cfg.n) };
            if *v != expected {
                return Ok(Outcome::Exact(Some(format!("entry ({i},{j}) = {v}"))));
            }
        }
    }
    Ok(Outcome::Exact(None))
}

fn reproducing(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = exact_only(cfg) {
        return Ok(s);
    }
    let z = build_zk(cfg.n, cfg.k)?;
    let mut out = Vec::new();
    for (s, p) in basis_p_sigma::<Q>(cfg.n, cfg.k) {
        let r = z.reproduce(&p.rename(Space::U, Space::V))?;
        out.push(exact_zero(|| format!("σ = {s:?}"), &(&r - &p)));
    }
    Ok(first_failure(out))
}

fn lemma5(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = exact_only(cfg) {
        return Ok(s);
    }
    if cfg.k == 0 {
        return Ok(Outcome::Skip("needs k >= 1".into()));
    }
    let u = MPoly::<Q>::vector_var(cfg.n, Space::U);
    let lower = basis_p_sigma::<Q>(cfg.n, cfg.k - 1);
    let upper = basis_p_sigma::<Q>(cfg.n, cfg.k);
    let res: Vec<Option<String>> = lower
        .par_iter()
        .flat_map_iter(|(s, p)| {
            let left = &p.reversion() * &u;
            upper.iter().map(move |(t, q)| {
                let m = (&left * q).sphere_mean(Space::U);
                exact_zero(|| format!("μ = {s:?}, σ = {t:?}"), &m)
            })
        })
        .collect();
    Ok(first_failure(res))
}

fn lemma6(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = exact_only(cfg) {
        return Ok(s);
    }
    let mut out = Vec::new();
    for (i, h) in harmonic_spanning_set::<Q>(cfg.n, cfg.k, Space::U)?.iter().enumerate() {
        let (lhs, rhs) = lemma6_check(h, cfg.k)?;
        out.push(exact_zero(|| format!("h #{i}"), &(&lhs - &rhs)));
    }
    Ok(first_failure(out))
}

fn gegenbauer_integral(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = needs_kernel(cfg) {
        return Ok(s);
    }
    let (lhs, rhs) = gegenbauer_integral_check(cfg.n, cfg.k)?;
    Ok(Outcome::Float((lhs - rhs).abs() / rhs.abs()))
}

fn rk_annihilates_zk(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = exact_only(cfg) {
        return Ok(s);
    }
    let z = build_zk(cfg.n, cfg.k)?;
    let left = RSFunction::from_poly(z.poly.clone(), cfg.k, Side::Left, Space::U)?.apply_rk()?;
    let right = RSFunction::from_poly(z.poly.clone(), cfg.k, Side::Right, Space::V)?.apply_rk()?;
    Ok(first_failure([
        exact_zero(|| "R_k Z_k".into(), left.body.numerator()),
        exact_zero(|| "Z_k R_k".into(), right.body.numerator()),
    ]))
}

fn ek_left(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = exact_only(cfg) {
        return Ok(s);
    }
    let e = kernel_ek(cfg.n, cfg.k)?;
    Ok(first_failure([exact_zero(|| "R_k F_k".into(), e.left_annihilation()?.numerator())]))
}

fn ek_right(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = exact_only(cfg) {
        return Ok(s);
    }
    let e = kernel_ek(cfg.n, cfg.k)?;
    Ok(first_failure([exact_zero(|| "F_k R_k".into(), e.right_annihilation_check()?.numerator())]))
}

fn fk_two_representations(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = exact_only(cfg) {
        return Ok(s);
    }
    let z = build_zk(cfg.n, cfg.k)?;
    Ok(first_failure([exact_zero(|| "left - right".into(), &two_representation_residual(&z)?)]))
}

fn zk_reflection(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = exact_only(cfg) {
        return Ok(s);
    }
    let z = build_zk(cfg.n, cfg.k)?;
    Ok(first_failure([exact_zero(|| "reflection".into(), &reflection_residual(&z)?)]))
}

// ---------------------------------------------------------------------------
// conformal checks

fn vec_n(n: usize, head: &[Q]) -> Vec<Q> {
    let mut v = vec![qi(0); n];
    for (slot, c) in v.iter_mut().zip(head) {
        *slot = c.clone();
    }
    v
}

/// `3/5 + 4/5 e_1 e_2`, a rational rotor.
pub fn test_rotor(n: usize) -> Multivector<Q> {
    Multivector::from_terms(n, [(Blade::SCALAR, q(3, 5)), (Blade::from_indices(&[0, 1]), q(4, 5))])
}

/// Unit vector `(3/5, 4/5, 0, ..)`.
pub fn test_mirror(n: usize) -> Multivector<Q> {
    Multivector::from_vector(&vec_n(n, &[q(3, 5), q(4, 5)]))
}

/// Fixed family of Möbius transformations used by the conformal checks.
pub fn test_matrices(n: usize) -> Result<Vec<(&'static str, VahlenMatrix)>> {
    let rotation = VahlenMatrix::orthogonal(&test_rotor(n))?;
    let general = VahlenMatrix::translation(&vec_n(n, &[qi(1), q(-1, 2)]))
        .compose(&VahlenMatrix::inversion_about(&vec_n(n, &[qi(0), qi(1), qi(2)])))
        .compose(&rotation)
        .compose(&VahlenMatrix::dilation(n, qi(2)));
    Ok(vec![
        ("translation", VahlenMatrix::translation(&vec_n(n, &[qi(1), qi(-2), q(1, 2)]))),
        ("dilation", VahlenMatrix::dilation(n, qi(2))),
        ("inversion", VahlenMatrix::inversion(n)),
        ("reflection", VahlenMatrix::orthogonal(&test_mirror(n))?),
        ("rotation", rotation),
        ("general", general),
    ])
}

fn pick(n: usize, names: &[&str]) -> Result<Vec<(&'static str, VahlenMatrix)>> {
    Ok(test_matrices(n)?.into_iter().filter(|(name, _)| names.contains(name)).collect())
}

fn xv(n: usize, i: usize) -> MPoly<Q> {
    MPoly::var(n, Space::X, i)
}

/// Harmonic (not monogenic) test inputs of degree `k` in `u`.
pub fn pk_inputs(n: usize, k: u32) -> Result<Vec<MPoly<Q>>> {
    let hs = harmonic_spanning_set::<Q>(n, k, Space::U)?;
    let first = hs.first().cloned().unwrap_or_else(|| MPoly::one(n));
    let last = hs.last().cloned().unwrap_or_else(|| MPoly::one(n));
    let e2 = Multivector::basis(n, 1);
    let f1 = &(&xv(n, 0) * &first) + &(&(&xv(n, 1) * &xv(n, 2)) * &last).right_mul_mv(&e2);
    let f2 = &(&xv(n, 2) * &xv(n, 2)) * &last;
    Ok(vec![f1, f2])
}

/// Left RS test function `x_1 P_σ + x_2 x_3 P_σ' e_1`.
pub fn rk_input(n: usize, k: u32) -> Result<RSFunction<Q>> {
    let basis = basis_p_sigma::<Q>(n, k);
    let a = &basis.first().expect("non-empty basis").1;
    let b = &basis.last().expect("non-empty basis").1;
    let body = &(&xv(n, 0) * a) + &(&(&xv(n, 1) * &xv(n, 2)) * b).right_mul_mv(&Multivector::basis(n, 0));
    RSFunction::from_poly(body, k, Side::Left, Space::U)
}

fn outcome_of(results: Vec<(String, CheckOutcome)>) -> Outcome {
    first_failure(results.into_iter().map(|(label, o)| {
        (!o.passed()).then(|| {
            format!("{label}: residual {:e} over {} samples, symbolic zero {}", o.residual, o.samples, o.symbolic_zero)
        })
    }))
}

type WeightFor = fn(&VahlenMatrix) -> Weight;

fn pk_suite(cfg: &CheckConfig, names: &[&str], weight: WeightFor) -> Result<Outcome> {
    if let Some(s) = exact_only(cfg) {
        return Ok(s);
    }
    let inputs = pk_inputs(cfg.n, cfg.k)?;
    let mut results = Vec::new();
    for (name, m) in pick(cfg.n, names)? {
        for (i, f) in inputs.iter().enumerate() {
            let o = intertwine_pk_check(&m, f, cfg.k, &weight(&m), cfg.seed)?;
            results.push((format!("{name}, input #{i}"), o));
        }
    }
    Ok(outcome_of(results))
}

fn rk_suite(cfg: &CheckConfig, names: &[&str], w1: WeightFor, w2: WeightFor) -> Result<Outcome> {
    if let Some(s) = exact_only(cfg) {
        return Ok(s);
    }
    let f = rk_input(cfg.n, cfg.k)?;
    let mut results = Vec::new();
    for (name, m) in pick(cfg.n, names)? {
        let o = intertwine_rk_check(&m, &f, &w1(&m), &w2(&m), cfg.seed)?;
        results.push((name.to_string(), o));
    }
    Ok(outcome_of(results))
}

fn w_j1(_: &VahlenMatrix) -> Weight {
    Weight::Conformal(WeightKind::J1)
}

fn w_jm1(_: &VahlenMatrix) -> Weight {
    Weight::Conformal(WeightKind::Jm1)
}

fn w_one(m: &VahlenMatrix) -> Weight {
    Weight::Constant(Multivector::one(m.dim()))
}

fn w_a_rev(m: &VahlenMatrix) -> Weight {
    Weight::Constant(m.a.reversion())
}

fn w_a_conj(m: &VahlenMatrix) -> Weight {
    Weight::Constant(m.a.conjugation())
}

const ALL_MATRICES: &[&str] = &["translation", "dilation", "inversion", "reflection", "rotation", "general"];

fn lemma1(cfg: &CheckConfig) -> Result<Outcome> {
    pk_suite(cfg, &["reflection", "rotation"], w_a_rev)
}

fn lemma2(cfg: &CheckConfig) -> Result<Outcome> {
    pk_suite(cfg, &["inversion"], w_j1)
}

fn lemma3(cfg: &CheckConfig) -> Result<Outcome> {
    pk_suite(cfg, &["translation"], w_one)
}

fn lemma4(cfg: &CheckConfig) -> Result<Outcome> {
    pk_suite(cfg, &["dilation"], w_one)
}

fn theorem1(cfg: &CheckConfig) -> Result<Outcome> {
    pk_suite(cfg, ALL_MATRICES, w_j1)
}

fn theorem2(cfg: &CheckConfig) -> Result<Outcome> {
    rk_suite(cfg, &["reflection", "rotation"], w_a_rev, w_a_conj)
}

fn theorem3(cfg: &CheckConfig) -> Result<Outcome> {
    rk_suite(cfg, &["inversion"], w_j1, w_jm1)
}

fn theorem4(cfg: &CheckConfig) -> Result<Outcome> {
    let rk = rk_suite(cfg, ALL_MATRICES, w_j1, w_jm1)?;
    if rk != Outcome::Exact(None) {
        return Ok(rk);
    }
    // the Dirac intertwining D_x J_1 = J_{-1} D_y underlying the R_k law
    let f = rk_input(cfg.n, cfg.k)?.body.numerator().clone();
    let mut results = Vec::new();
    for (name, m) in test_matrices(cfg.n)? {
        results.push((format!("Dirac, {name}"), dirac_conformal_check(&m, &f, cfg.seed)?));
    }
    Ok(outcome_of(results))
}

/// Kernel law at `2 ×` (number of `x`-monomials of `F_k`) point pairs per
/// matrix; returns the first failure.
pub fn kernel_conformal_outcome(e: &KernelEk, names: &[&str], seed: u64) -> Result<Outcome> {
    let n = e.n;
    let need = 2 * e.f_prime.numerator().split_by(Space::X).len();
    for (name, m) in pick(n, names)? {
        let pts = rational_points(n, 4 * need + 8, seed, &[]);
        let mut done = 0;
        for pair in pts.chunks(2) {
            if done == need {
                break;
            }
            match kernel_conformal_check(e, &m, &pair[0], &pair[1]) {
                Ok(r) if r == 0.0 => done += 1,
                Ok(r) => {
                    return Ok(Outcome::Exact(Some(format!(
                        "{name}: residual {r:e} at x = {:?}, y = {:?}",
                        pair[0], pair[1]
                    ))))
                }
                Err(Error::Singular) | Err(Error::NotInvertible(_)) | Err(Error::ZeroVector) => continue,
                Err(err) => return Err(err),
            }
        }
        if done < need {
            return Ok(Outcome::Exact(Some(format!("{name}: only {done} of {need} usable sample pairs"))));
        }
    }
    Ok(Outcome::Exact(None))
}

fn kernel_conformal(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = exact_only(cfg) {
        return Ok(s);
    }
    let e = kernel_ek(cfg.n, cfg.k)?;
    kernel_conformal_outcome(&e, ALL_MATRICES, cfg.seed)
}

// ---------------------------------------------------------------------------
// quadrature checks

fn quad(cfg: &CheckConfig) -> Result<Quad> {
    Quad::new(cfg.n, cfg.k, cfg.quad_order)
}

fn stokes(cfg: &CheckConfig) -> Result<Outcome> {
    if cfg.n < 3 {
        return Ok(Outcome::Skip("test functions need n >= 3".into()));
    }
    Ok(Outcome::Float(integral::stokes(&quad(cfg)?)?))
}

fn rs_stokes(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = needs_kernel(cfg) {
        return Ok(s);
    }
    Ok(Outcome::Float(integral::rs_stokes(&quad(cfg)?)?))
}

fn cauchy_theorem(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = needs_kernel(cfg) {
        return Ok(s);
    }
    Ok(Outcome::Float(integral::cauchy_theorem(&quad(cfg)?, &*kernel_ek(cfg.n, cfg.k)?)?))
}

fn cauchy_theorem_conformal(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = needs_kernel(cfg) {
        return Ok(s);
    }
    let m = integral::test_inversion(cfg.n);
    Ok(Outcome::Float(integral::cauchy_theorem_conformal(&quad(cfg)?, &*kernel_ek(cfg.n, cfg.k)?, &m)?))
}

fn cif(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = needs_kernel(cfg) {
        return Ok(s);
    }
    Ok(Outcome::Float(integral::cif(&quad(cfg)?, &*kernel_ek(cfg.n, cfg.k)?)?.max()))
}

fn cif_conformal(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = needs_kernel(cfg) {
        return Ok(s);
    }
    let m = integral::test_inversion(cfg.n);
    Ok(Outcome::Float(integral::cif_conformal(&quad(cfg)?, &*kernel_ek(cfg.n, cfg.k)?, &m)?))
}

fn borel_pompeiu(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = needs_kernel(cfg) {
        return Ok(s);
    }
    Ok(Outcome::Float(integral::borel_pompeiu(&quad(cfg)?, &*kernel_ek(cfg.n, cfg.k)?)?))
}

fn tk_delta(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = needs_kernel(cfg) {
        return Ok(s);
    }
    Ok(Outcome::Float(integral::tk_delta(&quad(cfg)?, &*kernel_ek(cfg.n, cfg.k)?)?))
}

fn tk_inverse(cfg: &CheckConfig) -> Result<Outcome> {
    if let Some(s) = needs_kernel(cfg) {
        return Ok(s);
    }
    Ok(Outcome::Float(integral::tk_inverse(&quad(cfg)?, &*kernel_ek(cfg.n, cfg.k)?)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique() {
        let mut names: Vec<_> = registry().iter().map(|c| c.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), registry().len());
    }

    #[test]
    fn unknown_name_is_an_error() {
        assert!(run_check("nonexistent", &CheckConfig::default()).is_err());
        assert!(run_checks(&["nonexistent".into()], &CheckConfig::default()).is_err());
    }

    #[test]
    fn lemma6_example() {
        let cfg = CheckConfig { n: 3, k: 2, ..Default::default() };
        let r = run_check("lemma6", &cfg).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.residual, Residual::ExactZero);
    }

    #[test]
    fn kernel_checks_skip_small_n() {
        let cfg = CheckConfig { n: 2, k: 1, ..Default::default() };
        let r = run_check("ek-left", &cfg).unwrap();
        assert_eq!(r.status, Status::Skipped);
        assert!(r.note.unwrap().contains("n >= 3"));
    }

    #[test]
    fn algebra_suite_float_mode() {
        match algebra_suite::<f64>(4, 10, 3) {
            Outcome::Float(r) => assert!(r < 1e-9),
            other => panic!("{other:?}"),
        }
    }
}
