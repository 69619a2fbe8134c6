//! Named end-to-end cases: K3 covers of Enriques surfaces and abelian covers of
//! bielliptic surfaces, each reduced to lattice computations plus cited theorems.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::counting::{
    fm_count, half_det_prime_count, hyperbolic_citation, nikulin_check, nikulin_citation, nikulin_conditions,
    twisted_partner_check, Citation, FmCountReport, GHodgeSpec, LatticeSummary, NikulinReport, SurfaceKind,
    TwistedPartnerReport,
};
use crate::discriminant::discriminant_form;
use crate::error::{Error, Result};
use crate::lattice::{has_hyperbolic_summand, is_primitive_sublattice, orthogonal_complement, Lattice, SublatticeSpec};
use crate::parse::parse_lattice_expr;

pub const SCENARIO_IDS: [&str; 9] = [
    "enriques-generic",
    "enriques-FN",
    "enriques-GM",
    "k3-rank-ge-12",
    "bielliptic-1",
    "bielliptic-2-rho2",
    "bielliptic-34-rho2",
    "bielliptic-3-rho3",
    "twisted-enriques-generic",
];

pub type Params = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Computation,
    Citation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateStep {
    pub step: String,
    pub kind: StepKind,
    pub detail: String,
    pub citation: Option<Citation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conclusion {
    /// `"=1"` or `"≤2"`.
    pub partner_count_bound: String,
    pub partner_set_description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub ambient: String,
    /// Images of the NS basis in ambient coordinates.
    pub generators: Vec<Vec<i64>>,
    pub primitive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScenarioReport {
    pub scenario_id: String,
    pub params: Params,
    pub surface: String,
    /// Order of the canonical bundle, i.e. the degree of the canonical cover.
    pub cover_degree: String,
    pub ns: Option<LatticeSummary>,
    pub transcendental: Option<LatticeSummary>,
    pub embedding: Option<Embedding>,
    pub certificates: Vec<CertificateStep>,
    pub count: Option<FmCountReport>,
    pub nikulin_on_transcendental: Option<NikulinReport>,
    pub twisted: Option<TwistedPartnerReport>,
    pub conclusion: Conclusion,
    pub notes: Vec<String>,
}

impl ScenarioReport {
    pub fn to_json_value(&self) -> Value {
        canonicalize(serde_json::to_value(self).expect("reports serialize"))
    }

    /// Pretty JSON with sorted keys; byte-identical across runs.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("values serialize")
    }
}

/// Recursively sorts object keys.
pub fn canonicalize(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let sorted: BTreeMap<String, Value> = map.into_iter().map(|(k, v)| (k, canonicalize(v))).collect();
            Value::Object(sorted.into_iter().collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonicalize).collect()),
        other => other,
    }
}

// ---------------------------------------------------------------------------
// Parameters

fn int_param(params: &Params, key: &str) -> Result<Option<i64>> {
    match params.get(key) {
        None => Ok(None),
        Some(Value::Number(n)) => n
            .as_i64()
            .map(Some)
            .ok_or_else(|| Error::invalid(format!("parameter {key} must be an integer"))),
        Some(Value::String(s)) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::invalid(format!("parameter {key} must be an integer, got {s:?}"))),
        Some(other) => Err(Error::invalid(format!("parameter {key} must be an integer, got {other}"))),
    }
}

fn required(params: &Params, key: &str, min: i64) -> Result<i64> {
    let v = int_param(params, key)?.ok_or_else(|| Error::invalid(format!("missing parameter {key}")))?;
    if v < min {
        return Err(Error::invalid(format!("parameter {key} must be >= {min}, got {v}")));
    }
    Ok(v)
}

fn check_keys(params: &Params, allowed: &[&str]) -> Result<()> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::invalid(format!("unknown parameter {k}"))),
        None => Ok(()),
    }
}

// ---------------------------------------------------------------------------
// Block-structural embeddings

/// Builds generator vectors for NS inside `E8(-1)^2 + U^3` (`k3 = true`) or `U^3`.
struct Embedder {
    rank: usize,
    u_offset: usize,
    gens: Vec<Vec<i64>>,
}

impl Embedder {
    fn k3() -> Self {
        Embedder {
            rank: 22,
            u_offset: 16,
            gens: Vec::new(),
        }
    }

    fn abelian() -> Self {
        Embedder {
            rank: 6,
            u_offset: 0,
            gens: Vec::new(),
        }
    }

    fn e(&self, u: usize) -> usize {
        self.u_offset + 2 * u
    }

    fn f(&self, u: usize) -> usize {
        self.u_offset + 2 * u + 1
    }

    fn push(&mut self, entries: &[(usize, i64)]) {
        let mut v = vec![0; self.rank];
        for &(i, x) in entries {
            v[i] += x;
        }
        self.gens.push(v);
    }

    /// `E8(-2)` as the diagonal of the two `E8(-1)` summands.
    fn e8_diagonal(&mut self) {
        for i in 0..8 {
            self.push(&[(i, 1), (8 + i, 1)]);
        }
    }

    /// `U(2)` as the diagonal of `U_a + U_b`.
    fn u2_diagonal(&mut self, a: usize, b: usize) {
        self.push(&[(self.e(a), 1), (self.e(b), 1)]);
        self.push(&[(self.f(a), 1), (self.f(b), 1)]);
    }

    /// `U(k)` spanned by `e_a` and `k f_a + e_b`.
    fn u_scaled(&mut self, k: i64, a: usize, b: usize) {
        self.push(&[(self.e(a), 1)]);
        self.push(&[(self.f(a), k), (self.e(b), 1)]);
    }

    fn u(&mut self, a: usize) {
        self.push(&[(self.e(a), 1)]);
        self.push(&[(self.f(a), 1)]);
    }

    /// `<-2m>` spanned by `e_a - m f_a`.
    fn negative_rank_one(&mut self, m: i64, a: usize) {
        self.push(&[(self.e(a), 1), (self.f(a), -m)]);
    }
}

struct Embedded {
    ns: Lattice,
    t: Lattice,
    embedding: Embedding,
    steps: Vec<CertificateStep>,
}

fn computation(step: &str, detail: String) -> CertificateStep {
    CertificateStep {
        step: step.into(),
        kind: StepKind::Computation,
        detail,
        citation: None,
    }
}

fn citation(step: &str, detail: &str, c: Citation) -> CertificateStep {
    CertificateStep {
        step: step.into(),
        kind: StepKind::Citation,
        detail: detail.into(),
        citation: Some(c),
    }
}

fn embed(ns_expr: &str, k3: bool, build: impl FnOnce(&mut Embedder)) -> Result<Embedded> {
    let ns = parse_lattice_expr(ns_expr)?;
    let (ambient, name, mut e) = if k3 {
        (Lattice::k3()?, "E8(-1)+E8(-1)+U+U+U", Embedder::k3())
    } else {
        (Lattice::abelian_h2()?, "U+U+U", Embedder::abelian())
    };
    build(&mut e);
    let spec = SublatticeSpec::new(ambient, e.gens.clone())?;
    if &spec.induced_gram()? != ns.gram() {
        return Err(Error::invalid(format!("embedding of {ns_expr} does not reproduce its Gram matrix")));
    }
    let primitive = is_primitive_sublattice(&spec)?.primitive;
    if !primitive {
        return Err(Error::invalid(format!("embedding of {ns_expr} is not primitive")));
    }
    let complement = orthogonal_complement(&spec)?;
    let t = match complement.lattice {
        Some(t) if !complement.degenerate => t,
        _ => return Err(Error::Degenerate(format!("complement of {ns_expr}"))),
    };
    let steps = vec![
        computation(
            "embedding",
            format!("NS = {ns_expr} embedded block-wise and primitively in {name}; induced Gram verified"),
        ),
        computation(
            "transcendental lattice",
            format!(
                "T = NS^perp via the integer kernel: rank {}, det {}, signature {:?}",
                t.rank(),
                t.det(),
                t.signature().pair()
            ),
        ),
    ];
    Ok(Embedded {
        ns,
        t,
        embedding: Embedding {
            ambient: name.into(),
            generators: e.gens,
            primitive,
        },
        steps,
    })
}

// ---------------------------------------------------------------------------
// Scenarios

fn torelli_k3() -> Citation {
    Citation::new(
        "two K3 surfaces are derived equivalent iff their transcendental lattices are Hodge isometric",
        "Mukai (1987); Orlov, Equivalences of derived categories and K3 surfaces (1997)",
    )
}

fn orlov_abelian() -> Citation {
    Citation::new(
        "derived equivalent abelian surfaces have Hodge isometric transcendental lattices",
        "Orlov, Derived categories of coherent sheaves on abelian varieties (2002)",
    )
}

fn shioda() -> Citation {
    Citation::new(
        "an abelian surface is determined up to isomorphism or duality by the Hodge structure on H^2",
        "T. Shioda, The period map of abelian surfaces (1978), Thm. 1",
    )
}

struct Builder {
    id: &'static str,
    params: Params,
    surface: String,
    cover_degree: String,
    steps: Vec<CertificateStep>,
    notes: Vec<String>,
}

impl Builder {
    fn new(id: &'static str, params: &Params, surface: &str, degree: &str) -> Self {
        Builder {
            id,
            params: params.clone(),
            surface: surface.into(),
            cover_degree: degree.into(),
            steps: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn counted(
        mut self,
        kind: SurfaceKind,
        emb: Embedded,
        nikulin_t: bool,
        conclusion: Conclusion,
    ) -> Result<ScenarioReport> {
        self.steps.extend(emb.steps);
        let count = fm_count(kind, &emb.ns, &emb.t, &GHodgeSpec::PlusMinus, None)?;
        if count.total != 1 {
            return Err(Error::invalid(format!(
                "{}: counting returned {} instead of 1",
                self.id, count.total
            )));
        }
        self.steps.push(computation(
            "partner count",
            format!(
                "{} via {}; G_Hodge mode {} (irrelevant once the left group is all of O(A))",
                count.interpretation, count.shortcut, count.ghodge
            ),
        ));
        for c in &count.citations {
            self.steps.push(citation("counting rule", &c.statement, c.clone()));
        }
        let nikulin_on_transcendental = if nikulin_t {
            let r = nikulin_check(&emb.t)?;
            self.steps.push(computation(
                "Nikulin on T",
                format!(
                    "conditions {} for T (rank {}, l_2 = {})",
                    if r.hypotheses_hold { "hold" } else { "fail" },
                    emb.t.rank(),
                    r.condition_b.l_2
                ),
            ));
            Some(r)
        } else {
            None
        };
        self.steps.push(citation(
            "bridge",
            match kind {
                SurfaceKind::K3 => "derived equivalence of K3 surfaces is decided on transcendental lattices",
                SurfaceKind::Abelian => "partners of abelian surfaces are governed by T(A) and Shioda's theorem",
            },
            match kind {
                SurfaceKind::K3 => torelli_k3(),
                SurfaceKind::Abelian => orlov_abelian(),
            },
        ));
        if kind == SurfaceKind::Abelian {
            self.steps.push(citation("bridge", "H^2 determines A up to duality", shioda()));
        }
        Ok(ScenarioReport {
            scenario_id: self.id.into(),
            params: self.params,
            surface: self.surface,
            cover_degree: self.cover_degree,
            ns: Some(LatticeSummary::of(&emb.ns)?),
            transcendental: Some(LatticeSummary::of(&emb.t)?),
            embedding: Some(emb.embedding),
            certificates: self.steps,
            count: Some(count),
            nikulin_on_transcendental,
            twisted: None,
            conclusion,
            notes: self.notes,
        })
    }
}

fn exactly_one(set: &str) -> Conclusion {
    Conclusion {
        partner_count_bound: "=1".into(),
        partner_set_description: set.into(),
    }
}

fn at_most_two() -> Conclusion {
    Conclusion {
        partner_count_bound: "≤2".into(),
        partner_set_description: "{A, Â}".into(),
    }
}

const HILBERT_NOTE: &str = "Consequence: if Hilb^n of two such K3 covers are birational they are derived \
                            equivalent (Ploog), hence isomorphic; the same holds for the Enriques manifolds \
                            Hilb^n(X)/(Z/2) with n odd over generic Enriques surfaces.";
const KUMMER_NOTE: &str = "Consequence: if K_n(A) is birational to K_n(B) for n >= 2, then B is A or Â.";

fn enriques_generic(params: &Params, b: Builder) -> Result<ScenarioReport> {
    check_keys(params, &[])?;
    let emb = embed("U(2)+E8(-2)", true, |e| {
        e.u2_diagonal(0, 1);
        e.e8_diagonal();
    })?;
    let mut b = b;
    let expected = parse_lattice_expr("U+U(2)+E8(-2)")?;
    let same_form = crate::fqf::fqf_isometric(&discriminant_form(&emb.t)?, &discriminant_form(&expected)?)?;
    b.steps.push(computation(
        "genus of T",
        format!(
            "q_T isometric to the form of U+U(2)+E8(-2): {same_form}; signature {:?}",
            emb.t.signature().pair()
        ),
    ));
    b.steps.push(citation(
        "extension",
        "isometries of E+U extend to the K3 lattice",
        Citation::new(
            "every isometry of the orthogonal complement of the Enriques lattice extends to the K3 lattice",
            "Y. Namikawa, Periods of Enriques surfaces (1985), Thm. 1.4",
        ),
    ));
    b.notes.push(HILBERT_NOTE.into());
    b.counted(SurfaceKind::K3, emb, true, exactly_one("{X}"))
}

fn enriques_fn(params: &Params, mut b: Builder) -> Result<ScenarioReport> {
    check_keys(params, &["N"])?;
    let n = required(params, "N", 2)?;
    let emb = embed(&format!("U(2)+E8(-2)+<{}>", -2 * n), true, |e| {
        e.u2_diagonal(0, 1);
        e.e8_diagonal();
        e.negative_rank_one(n, 2);
    })?;
    b.steps.push(citation(
        "classification",
        "Picard rank 11 K3 covers of Enriques surfaces have NS = F_N (N >= 2) or G_M (M >= 1)",
        Citation::new(
            "classification of Neron-Severi lattices of rank 11 K3 covers of Enriques surfaces",
            "H. Ohashi, On the number of Enriques quotients of a K3 surface (2007), Prop. 3.5",
        ),
    ));
    b.notes.push(HILBERT_NOTE.into());
    b.counted(SurfaceKind::K3, emb, true, exactly_one("{X}"))
}

fn enriques_gm(params: &Params, mut b: Builder) -> Result<ScenarioReport> {
    check_keys(params, &["M"])?;
    let m = required(params, "M", 1)?;
    let emb = embed(&format!("U+E8(-2)+<{}>", -4 * m), true, |e| {
        e.u(0);
        e.e8_diagonal();
        e.negative_rank_one(2 * m, 1);
    })?;
    b.steps.push(citation("extension", "NS contains U", hyperbolic_citation()));
    b.notes.push(HILBERT_NOTE.into());
    b.counted(SurfaceKind::K3, emb, false, exactly_one("{X}"))
}

fn k3_rank_ge_12(params: &Params, mut b: Builder) -> Result<ScenarioReport> {
    check_keys(params, &["rho", "ns"])?;
    let ns = match params.get("ns") {
        None => None,
        Some(Value::String(s)) => Some(parse_lattice_expr(s)?),
        Some(other) => return Err(Error::invalid(format!("parameter ns must be a lattice expression, got {other}"))),
    };
    let rho = match (int_param(params, "rho")?, &ns) {
        (Some(r), Some(l)) if r as usize != l.rank() => {
            return Err(Error::invalid(format!("rho = {r} but NS has rank {}", l.rank())))
        }
        (Some(r), _) => r,
        (None, Some(l)) => l.rank() as i64,
        (None, None) => return Err(Error::invalid("missing parameter rho (or ns)")),
    };
    if !(12..=20).contains(&rho) {
        return Err(Error::invalid(format!("rho must lie in 12..=20, got {rho}")));
    }
    let rank_t = (22 - rho) as usize;
    b.steps.push(citation(
        "rule",
        "K3 surfaces of Picard rank >= 12 have no nontrivial Fourier-Mukai partners",
        Citation::new(
            "for rho >= 12, NS contains U and every Hodge isometry of T extends",
            "S. Mukai, On the moduli space of bundles on K3 surfaces I (1987); Hosono-Lian-Oguiso-Yau (2004)",
        ),
    ));
    let mut summary = None;
    if let Some(l) = &ns {
        if !l.is_even() || l.signature().pair() != (1, rho as usize - 1) {
            return Err(Error::precondition(format!(
                "NS must be even of signature (1, {}), got {:?}",
                rho - 1,
                l.signature().pair()
            )));
        }
        let q = discriminant_form(l)?;
        let length = q.elementary_divisors().len();
        b.steps.push(computation(
            "rank data",
            format!(
                "l(A_NS) = {length} <= rank(T) = {rank_t} <= rho - 2 = {}: {}",
                rho - 2,
                length <= rank_t && rank_t as i64 <= rho - 2
            ),
        ));
        if rank_t >= 3 && rho <= 19 {
            // T has signature (2, 20 - rho) and q_T = -q_NS
            let (a, bcond) = nikulin_conditions(rank_t, &q.negated())?;
            let holds = a.iter().all(|c| c.holds) && bcond.holds != Some(false);
            b.steps.push(computation(
                "Nikulin on T from rank data",
                format!("rank(T) = {rank_t}, conditions (a)/(b) {}", if holds { "hold" } else { "fail" }),
            ));
            if holds {
                b.steps.push(citation("uniqueness", "Nikulin's criterion applied to T", nikulin_citation()));
            }
        }
        let hyperbolic = has_hyperbolic_summand(l, crate::lattice::DEFAULT_HYPERBOLIC_HEIGHT)?;
        b.steps.push(computation(
            "hyperbolic summand",
            format!("U in NS detected: {}", hyperbolic.is_found()),
        ));
        summary = Some(LatticeSummary::of(l)?);
    }
    b.notes.push(HILBERT_NOTE.into());
    Ok(ScenarioReport {
        scenario_id: b.id.into(),
        params: b.params,
        surface: b.surface,
        cover_degree: b.cover_degree,
        ns: summary,
        transcendental: None,
        embedding: None,
        certificates: b.steps,
        count: None,
        nikulin_on_transcendental: None,
        twisted: None,
        conclusion: exactly_one("{X}"),
        notes: b.notes,
    })
}

fn bielliptic_1(params: &Params, mut b: Builder) -> Result<ScenarioReport> {
    check_keys(params, &[])?;
    let emb = embed("U", false, |e| e.u(0))?;
    b.steps.push(citation(
        "self-duality",
        "a product of elliptic curves is principally polarized, so A is isomorphic to its dual",
        shioda(),
    ));
    b.notes.push(
        "The same conclusion covers cases (2)-(4) with Picard rank 4, where the cover is again a product."
            .into(),
    );
    b.notes.push(KUMMER_NOTE.into());
    b.counted(SurfaceKind::Abelian, emb, false, exactly_one("{A}"))
}

fn bielliptic_2_rho2(params: &Params, mut b: Builder) -> Result<ScenarioReport> {
    check_keys(params, &[])?;
    let emb = embed("U(3)", false, |e| e.u_scaled(3, 0, 1))?;
    let r = nikulin_check(&emb.ns)?;
    b.steps.push(computation(
        "Nikulin on NS",
        format!(
            "condition (a) fails at p = 3 (rank 2 < l_3 + 2 = {}); surjectivity is checked directly",
            r.condition_a.iter().find(|c| c.p == 3).map_or(0, |c| c.l_p + 2)
        ),
    ));
    b.notes.push(KUMMER_NOTE.into());
    b.counted(SurfaceKind::Abelian, emb, false, at_most_two())
}

fn bielliptic_34_rho2(params: &Params, mut b: Builder) -> Result<ScenarioReport> {
    check_keys(params, &[])?;
    let emb = embed("U(2)", false, |e| e.u_scaled(2, 0, 1))?;
    b.notes.push(KUMMER_NOTE.into());
    b.notes.push(
        "The count bounds the partners by {A, Â}; whether Â is a distinct surface is not decided here.".into(),
    );
    b.counted(SurfaceKind::Abelian, emb, false, at_most_two())
}

fn bielliptic_3_rho3(params: &Params, mut b: Builder) -> Result<ScenarioReport> {
    check_keys(params, &["N"])?;
    let n = required(params, "N", 1)?;
    let emb = embed(&format!("U(2)+<{}>", -4 * n), false, |e| {
        e.u_scaled(2, 0, 1);
        e.negative_rank_one(2 * n, 2);
    })?;
    if let Some(s) = half_det_prime_count(&emb.ns) {
        b.notes.push(format!(
            "s(A) = number of primes dividing |det NS|/2 = {s}; for End(A) = Z the partner count would be 2^s = {}, \
             shown for reference only.",
            1u64 << s
        ));
    }
    b.notes.push(KUMMER_NOTE.into());
    b.counted(SurfaceKind::Abelian, emb, false, at_most_two())
}

fn twisted_enriques_generic(params: &Params, b: Builder) -> Result<ScenarioReport> {
    let mut report = enriques_generic(params, b)?;
    let t = parse_lattice_expr("U+U(2)+E8(-2)")?;
    let twisted = twisted_partner_check(&t)?;
    report.certificates.push(computation(
        "twisted count",
        format!(
            "|I^2(A_T)| = {} elements of order exactly 2 (order dividing 2: {}) > {} >= |O_Hodge(T)|",
            twisted.order2_count, twisted.order_dividing_2_count, twisted.hodge_bound
        ),
    ));
    for c in &twisted.citations {
        report.certificates.push(citation("twisted counting rule", &c.statement, c.clone()));
    }
    report.conclusion.partner_set_description =
        "untwisted partners: {X}; a twisted partner (Brauer class of order 2) exists".into();
    report.notes.push(
        "I^2 counts elements of order exactly 2; the count of elements killed by 2 is also reported.".into(),
    );
    report.twisted = Some(twisted);
    Ok(report)
}

pub fn run_scenario(id: &str, params: &Params) -> Result<ScenarioReport> {
    const K3: &str = "K3 cover of an Enriques surface";
    const AB: &str = "abelian cover of a bielliptic surface";
    match id {
        "enriques-generic" => enriques_generic(params, Builder::new("enriques-generic", params, &format!("{K3}, NS = E"), "2")),
        "enriques-FN" => enriques_fn(params, Builder::new("enriques-FN", params, &format!("{K3}, rank 11, NS = F_N"), "2")),
        "enriques-GM" => enriques_gm(params, Builder::new("enriques-GM", params, &format!("{K3}, rank 11, NS = G_M"), "2")),
        "k3-rank-ge-12" => k3_rank_ge_12(params, Builder::new("k3-rank-ge-12", params, &format!("{K3}, Picard rank >= 12"), "2")),
        "bielliptic-1" => bielliptic_1(params, Builder::new("bielliptic-1", params, &format!("{AB}, case (1): E x F"), "2, 3, 4 or 6")),
        "bielliptic-2-rho2" => bielliptic_2_rho2(
            params,
            Builder::new("bielliptic-2-rho2", params, &format!("{AB}, case (2), E and F not isogenous"), "3"),
        ),
        "bielliptic-34-rho2" => bielliptic_34_rho2(
            params,
            Builder::new("bielliptic-34-rho2", params, &format!("{AB}, cases (3)/(4), Picard rank 2"), "2 or 4"),
        ),
        "bielliptic-3-rho3" => bielliptic_3_rho3(
            params,
            Builder::new("bielliptic-3-rho3", params, &format!("{AB}, case (3), Picard rank 3"), "2"),
        ),
        "twisted-enriques-generic" => twisted_enriques_generic(
            params,
            Builder::new("twisted-enriques-generic", params, &format!("{K3}, NS = E, twisted partners"), "2"),
        ),
        other => Err(Error::invalid(format!(
            "unknown scenario {other:?}; expected one of {}",
            SCENARIO_IDS.join(", ")
        ))),
    }
}

// ---------------------------------------------------------------------------
// Batches

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
pub struct ManifestEntry {
    pub id: String,
    #[serde(default)]
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchEntry {
    pub index: usize,
    pub id: String,
    pub report: Option<ScenarioReport>,
    pub error: Option<String>,
}

pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("manifest is not valid JSON: {e}")))?;
    let Value::Array(items) = value else {
        return Err(Error::invalid("manifest must be a JSON array"));
    };
    items
        .into_iter()
        .enumerate()
        .map(|(i, item)| {
            serde_json::from_value(item).map_err(|e| Error::invalid(format!("manifest entry {i}: {e}")))
        })
        .collect()
}

/// Runs entries in parallel; output order follows the manifest.
pub fn run_batch(entries: &[ManifestEntry]) -> Vec<BatchEntry> {
    entries
        .par_iter()
        .enumerate()
        .map(|(index, entry)| match run_scenario(&entry.id, &entry.params) {
            Ok(r) => BatchEntry {
                index,
                id: entry.id.clone(),
                report: Some(r),
                error: None,
            },
            Err(e) => BatchEntry {
                index,
                id: entry.id.clone(),
                report: None,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

pub fn run_batch_file(path: &Path) -> Result<Vec<BatchEntry>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(run_batch(&parse_manifest(&text)?))
}

/// Every scenario, with `F_N` for `N = 2..=10`, `G_M` for `M = 1..=3` and the
/// rank-3 bielliptic case for `N = 1..=10`.
pub fn full_manifest() -> Vec<ManifestEntry> {
    let entry = |id: &str, params: &[(&str, i64)]| ManifestEntry {
        id: id.into(),
        params: params.iter().map(|&(k, v)| (k.to_string(), Value::from(v))).collect(),
    };
    let mut out = vec![entry("enriques-generic", &[])];
    out.extend((2..=10).map(|n| entry("enriques-FN", &[("N", n)])));
    out.extend((1..=3).map(|m| entry("enriques-GM", &[("M", m)])));
    out.push(entry("k3-rank-ge-12", &[("rho", 12)]));
    out.push(entry("bielliptic-1", &[]));
    out.push(entry("bielliptic-2-rho2", &[]));
    out.push(entry("bielliptic-34-rho2", &[]));
    out.extend((1..=10).map(|n| entry("bielliptic-3-rho3", &[("N", n)])));
    out.push(entry("twisted-enriques-generic", &[]));
    out
}
