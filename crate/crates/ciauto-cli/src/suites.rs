//! One function per verification suite. Each returns records in production
//! order; the caller normalizes. `Err` carries records produced before a
//! budget ran out, which the driver keeps and marks incomplete.

use std::collections::BTreeMap;

use ciauto::certify::{sweep_types, CaseCertificate};
use ciauto::combinat::{fmt_rational, h0_restricted, section_pattern};
use ciauto::eigencalc::{eigenspace_dims, primes_up_to, sweep_codim_gap, sweep_max_bound, SweepRange, SweepSummary};
use ciauto::exceptions::{enumerate_subspace_exceptions, filter_theorem_exceptions};
use ciauto::report::{Record, Status};
use ciauto::torelli::{generic_member, torelli_sweep, TorelliConfig};
use ciauto::varieties::cyclic::cyclic_22_example;
use ciauto::varieties::ideal::h0_oracle;
use ciauto::varieties::nodes::{nodal_ci, verify_nodes};
use ciauto::varieties::pencil::pencil_automorphisms;
use ciauto::varieties::strata::strata;
use ciauto::varieties::{LinearSubspace, PointSet, PrimeField, VarietyError};
use ciauto::{birres, CIType, EigenSpec, Exec};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Lemma44,
    Theorem,
}

pub fn exceptions(n_max: u32, emit: Emit, exec: Exec) -> Vec<Record> {
    let records = enumerate_subspace_exceptions(n_max, exec);
    match emit {
        Emit::Lemma44 => records
            .iter()
            .map(|r| Record::new("exceptions", format!("l={} {}", r.l, r.ci), Status::Passed, r))
            .collect(),
        Emit::Theorem => filter_theorem_exceptions(&records, n_max)
            .into_iter()
            .map(|ci| Record::new("exceptions", ci.to_string(), Status::Passed, json!({ "ci": ci })))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyConfig {
    /// A single type, when given; otherwise every type of dimension at
    /// least two in the range below.
    pub single: Option<CIType>,
    pub n_max: u32,
    pub max_codim: u32,
    pub max_degree: u32,
    pub p_max: u32,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig { single: None, n_max: 10, max_codim: 3, max_degree: 4, p_max: 7 }
    }
}

impl CertifyConfig {
    pub fn types(&self) -> Vec<CIType> {
        match &self.single {
            Some(ci) => vec![ci.clone()],
            None => CIType::enumerate(3..=self.n_max, self.max_codim, self.max_degree)
                .into_iter()
                .filter(|ci| ci.dim() >= 2 && !ci.is_all_quadric())
                .collect(),
        }
    }
}

fn certificate_json(c: &CaseCertificate) -> serde_json::Value {
    json!({
        "p": c.spec.p(),
        "multiplicities": c.spec.multiplicities(),
        "case": c.case.to_string(),
        "w": c.w,
        "quadric_pair": c.quadric_pair,
        "lhs": fmt_rational(&c.lhs),
        "rhs": fmt_rational(&c.rhs),
    })
}

pub fn certify(cfg: &CertifyConfig, exec: Exec) -> Vec<Record> {
    sweep_types(&cfg.types(), cfg.p_max, exec)
        .into_iter()
        .map(|t| {
            let status = if t.skipped.is_some() {
                Status::Unknown
            } else if t.failing.is_empty() {
                Status::Passed
            } else {
                Status::Failed
            };
            let data = json!({
                "ci": t.ci,
                "reduced": t.reduced,
                "case": t.case.map(|c| c.to_string()),
                "skipped": t.skipped,
                "specs": t.specs,
                "certificates": t.certificates,
                "min_margin": t.min_margin.as_ref().map(fmt_rational),
                "failing": t.failing.iter().map(certificate_json).collect::<Vec<_>>(),
            });
            Record::new("certify", t.ci.to_string(), status, data)
        })
        .collect()
}

fn sweep_record(key: &str, s: &SweepSummary) -> Record {
    Record::check("eigen", key, s.violations.is_empty(), s)
}

/// Dimension of every eigenspace of degree-`d` monomials by listing them.
pub fn eigen_by_enumeration(spec: &EigenSpec, d: u32) -> Vec<u64> {
    fn walk(w: &[u32], p: u32, left: u32, acc: u32, out: &mut [u64]) {
        match w.split_first() {
            None => out[acc as usize] += u64::from(left == 0),
            Some((&x, rest)) => {
                for e in 0..=left {
                    walk(rest, p, left - e, (acc + e * x) % p, out);
                }
            }
        }
    }
    let mut out = vec![0; spec.p() as usize];
    walk(spec.weights(), spec.p(), d, 0, &mut out);
    out
}

/// Dynamic-programming dimensions against monomial enumeration.
pub fn eigen_coherence(n_max: u32, d_max: u32, p_max: u32) -> Record {
    let mut checked = 0u64;
    let mut mismatches = Vec::new();
    for p in primes_up_to(p_max) {
        for n in 1..=n_max {
            for_each_weight_vector(p, n as usize + 1, &mut |w| {
                let spec = EigenSpec::new(p, w.to_vec()).expect("valid weights");
                for d in 0..=d_max {
                    checked += 1;
                    let dp = eigenspace_dims(&spec, d).dims;
                    let en: Vec<BigUint> = eigen_by_enumeration(&spec, d).into_iter().map(BigUint::from).collect();
                    if dp != en {
                        mismatches.push(json!({ "p": p, "weights": w, "d": d }));
                    }
                }
            });
        }
    }
    Record::check(
        "eigen",
        "dp-vs-enumeration",
        mismatches.is_empty(),
        json!({ "n_max": n_max, "d_max": d_max, "p_max": p_max, "checked": checked, "mismatches": mismatches }),
    )
}

/// Nondecreasing weight vectors of length `len` with entries in `0..p`.
fn for_each_weight_vector(p: u32, len: usize, visit: &mut dyn FnMut(&[u32])) {
    fn go(p: u32, len: usize, lo: u32, cur: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
        if cur.len() == len {
            visit(cur);
            return;
        }
        for x in lo..p {
            cur.push(x);
            go(p, len, x, cur, visit);
            cur.pop();
        }
    }
    go(p, len, 0, &mut Vec::with_capacity(len), visit);
}

pub fn eigen(range: &SweepRange, exec: Exec) -> Vec<Record> {
    let gap_range = SweepRange { d_min: range.d_min.max(2), ..range.clone() };
    vec![
        sweep_record("codim-gap", &sweep_codim_gap(&gap_range, exec)),
        sweep_record("max-bound", &sweep_max_bound(range, exec)),
        eigen_coherence(5, 6, 7),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BirresConfig {
    pub n_max: u32,
    pub random_maps: u64,
    pub correspondence_maps: u64,
    pub arcs_per_map: u64,
    pub seed: u64,
}

impl Default for BirresConfig {
    fn default() -> Self {
        BirresConfig { n_max: 12, random_maps: 1000, correspondence_maps: 50, arcs_per_map: 100, seed: 1 }
    }
}

pub fn birres(cfg: &BirresConfig, exec: Exec) -> Vec<Record> {
    let s = birres::sweep(cfg.n_max, cfg.random_maps, cfg.correspondence_maps, cfg.arcs_per_map, cfg.seed, exec);
    vec![
        Record::check(
            "birres",
            "duality",
            s.flag_failures.is_empty(),
            json!({ "maps": s.maps, "failures": s.flag_failures }),
        ),
        Record::check(
            "birres",
            "stratum-correspondence",
            s.correspondence_failures.is_empty(),
            json!({ "maps": s.correspondence_maps, "arcs": s.arcs, "failures": s.correspondence_failures }),
        ),
    ]
}

pub fn torelli(cfg: &TorelliConfig, exec: Exec) -> Vec<Record> {
    torelli_sweep(cfg, exec)
        .into_iter()
        .map(|r| {
            let ok = !r.unexpected_flag() && !r.missed_exception() && !r.routes_disagree();
            Record::check("torelli", r.ci.to_string(), ok, &r)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietiesConfig {
    /// Large primes for the identity and oracle checks.
    pub primes: Vec<u64>,
    /// Small primes where whole projective spaces are enumerated.
    pub small_primes: Vec<u64>,
    pub seed: u64,
    /// Seeds tried per construction before giving up on genericity.
    pub attempts: u64,
    pub budget_points: u128,
}

impl Default for VarietiesConfig {
    fn default() -> Self {
        VarietiesConfig { primes: vec![101, 103], small_primes: vec![11, 13], seed: 1, attempts: 32, budget_points: 2_000_000 }
    }
}

fn ci(n: u32, d: &[u32]) -> CIType {
    CIType::new(n, d.to_vec()).expect("valid type")
}

fn pencil_tuple(q: u64, n: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (q << 8) ^ n as u64);
    let mut pool: Vec<u64> = (0..q).collect();
    pool.shuffle(&mut rng);
    pool.truncate(n + 1);
    pool
}

/// For each `n` in 4..=6 and each large prime, seeded tuples of `n + 1`
/// distinct eigenvalues starting at `cfg.seed`. A tuple with a Möbius
/// symmetry is not general; it is kept in the record and the next seed is
/// tried. The sign-map group must have order `2^n` for every tuple.
pub fn pencil(cfg: &VarietiesConfig) -> Result<Vec<Record>, VarietyError> {
    let mut out = Vec::new();
    for &q in &cfg.primes {
        let field = PrimeField::new(q)?;
        for n in 4..=6usize {
            let mut rejected = Vec::new();
            let mut general = None;
            let mut orders_ok = true;
            for seed in cfg.seed..cfg.seed + cfg.attempts {
                let r = pencil_automorphisms(&pencil_tuple(q, n, seed), field)?;
                orders_ok &= r.sign_maps_preserving == r.sign_maps && r.group_order == 1 << n;
                if r.ok() {
                    general = Some((seed, r));
                    break;
                }
                rejected.push(json!({ "seed": seed, "reason": "Möbius symmetry: tuple not general", "report": r }));
            }
            let ok = orders_ok && general.is_some();
            let (seed, report) = general.unzip();
            let data = json!({ "n": n, "q": q, "seed": seed, "report": report, "rejected": rejected });
            out.push(Record::check("varieties", format!("pencil n={n} q={q}"), ok, data));
        }
    }
    Ok(out)
}

pub fn cyclic(cfg: &VarietiesConfig) -> Result<Vec<Record>, VarietyError> {
    let mut out = Vec::new();
    for n in 3..=8usize {
        let field = PrimeField::with_root_of_unity(2 * n as u64, cfg.primes[0]);
        let r = cyclic_22_example(n, field, None)?;
        out.push(Record::check("varieties", format!("cyclic n={n}"), r.ok(), &r));
    }
    Ok(out)
}

/// Why the member for one seed is not the nodal variety we want, if it
/// is not.
fn nodal_attempt(x: &CIType, field: PrimeField, seed: u64, enumerate: bool, cfg: &VarietiesConfig, exec: Exec) -> Result<(Option<&'static str>, serde_json::Value), VarietyError> {
    let nvars = x.ambient() as usize + 1;
    let coords = PointSet::coordinate_points(nvars);
    let forms = nodal_ci(x, field, seed)?;
    let nodes = verify_nodes(&forms, &coords.points, field)?;
    let mut data = json!({
        "seed": seed,
        "forms": forms.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "nodes": nodes,
    });
    if !nodes.all_nodes {
        return Ok((Some("a coordinate point is not a node"), data));
    }
    if enumerate {
        let s = strata(field, &forms, &LinearSubspace::whole(nvars), cfg.budget_points, exec)?;
        let singular = s.singular();
        let clean = singular == coords.points;
        data["strata"] = json!({
            "claim": "no singular rational point over F_q outside the coordinate points",
            "enumerated": s.enumerated,
            "on_x": s.on_x,
            "singular": singular,
            "holds": clean,
        });
        if !clean {
            return Ok((Some("extra singular rational point"), data));
        }
    }
    Ok((None, data))
}

/// Seeds from `cfg.seed` on until one member has nodes at every coordinate
/// point and, with `enumerate`, no other singular rational point over F_q.
/// Rejected seeds stay in the record.
fn nodal_record(x: &CIType, q: u64, enumerate: bool, cfg: &VarietiesConfig, exec: Exec) -> Result<Record, VarietyError> {
    let field = PrimeField::new(q)?;
    let mut rejected = Vec::new();
    let mut accepted = None;
    for seed in cfg.seed..cfg.seed + cfg.attempts {
        let (why, data) = nodal_attempt(x, field, seed, enumerate, cfg, exec)?;
        match why {
            None => {
                accepted = Some(data);
                break;
            }
            Some(reason) => rejected.push(json!({ "seed": seed, "reason": reason, "attempt": data })),
        }
    }
    let ok = accepted.is_some();
    let data = json!({ "ci": x, "q": q, "enumerated": enumerate, "accepted": accepted, "rejected": rejected });
    let mode = if enumerate { "nodes+strata" } else { "nodes" };
    Ok(Record::check("varieties", format!("nodal {x} q={q} {mode}"), ok, data))
}

/// The cubic surface is enumerated over a small and a large prime. The
/// threefolds have nodes verified over the large prime and are enumerated
/// over the small ones, where the whole ambient space fits the budget.
pub fn nodal(cfg: &VarietiesConfig, exec: Exec) -> Result<Vec<Record>, VarietyError> {
    let big = cfg.primes[0];
    let cubic = ci(3, &[3]);
    let mut out = vec![
        nodal_record(&cubic, cfg.small_primes[0], true, cfg, exec)?,
        nodal_record(&cubic, big, true, cfg, exec)?,
    ];
    for x in [ci(4, &[2, 3]), ci(5, &[2, 2, 3])] {
        out.push(nodal_record(&x, big, false, cfg, exec)?);
        for &q in &cfg.small_primes {
            out.push(nodal_record(&x, q, true, cfg, exec)?);
        }
    }
    Ok(out)
}

/// Types with ambient `<= n_max`, codimension `<= 3`, degrees `<= 4`, at
/// every degree the closed form covers.
pub fn h0_cases(n_max: u32) -> Vec<(CIType, u32)> {
    let mut out = Vec::new();
    for x in CIType::enumerate(2..=n_max, 3, 4) {
        let mut ds: Vec<u32> = x.degrees().to_vec();
        ds.dedup();
        for d in ds {
            if section_pattern(&x, d).is_ok() {
                out.push((x.clone(), d));
            }
        }
    }
    out
}

pub fn h0_coherence(cfg: &VarietiesConfig, n_max: u32, exec: Exec) -> Result<Vec<Record>, VarietyError> {
    let mut out = Vec::new();
    for &q in &cfg.primes {
        let field = PrimeField::new(q)?;
        let seed = cfg.seed;
        let rows = exec.map(h0_cases(n_max), |(x, d)| {
            let forms = generic_member(&x, field, seed);
            let oracle = h0_oracle(field, &forms, x.ambient() as usize + 1, d);
            let closed = h0_restricted(&x, d).expect("in range");
            (x, d, closed.to_string(), oracle)
        });
        let mut mismatches = Vec::new();
        for (x, d, closed, oracle) in &rows {
            if *closed != oracle.to_string() {
                mismatches.push(json!({ "ci": x, "d": d, "closed_form": closed, "oracle": oracle }));
            }
        }
        out.push(Record::check(
            "varieties",
            format!("h0-coherence q={q}"),
            mismatches.is_empty(),
            json!({ "n_max": n_max, "cases": rows.len(), "seed": seed, "mismatches": mismatches }),
        ));
    }
    Ok(out)
}

/// Every varieties check; stops at the first budget or field error and
/// returns what was produced so far alongside it.
pub fn varieties(cfg: &VarietiesConfig, exec: Exec) -> (Vec<Record>, Option<VarietyError>) {
    let mut out = Vec::new();
    let steps: [&dyn Fn() -> Result<Vec<Record>, VarietyError>; 4] = [
        &|| pencil(cfg),
        &|| cyclic(cfg),
        &|| nodal(cfg, exec),
        &|| h0_coherence(cfg, 6, exec),
    ];
    for step in steps {
        match step() {
            Ok(rs) => out.extend(rs),
            Err(e) => return (out, Some(e)),
        }
    }
    (out, None)
}

/// Per-suite failure counts, for the text summary of `all`.
pub fn failures_by_suite(records: &[Record]) -> BTreeMap<String, u64> {
    let mut m = BTreeMap::new();
    for r in records.iter().filter(|r| r.status == Status::Failed) {
        *m.entry(r.suite.clone()).or_insert(0) += 1;
    }
    m
}
