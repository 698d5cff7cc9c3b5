//! Coordinate shadow of resolving a scaling map.
//!
//! A scaling map multiplies coordinate block `k` by `t^{μ_k}`, with
//! `0 = μ_0 < μ_1 < ... < μ_l`. Block 0 is `z_0..z_{a_1}`, block `k` is
//! `z_{a_k+1}..z_{a_{k+1}}`, block `l` is `z_{a_l+1}..z_n`. Its centres are
//! coordinate flags:
//!
//! * `Λ_{f,i}` (`1 <= i <= l`): blocks `0..i` vanish; dimension `n - a_i - 1`.
//! * `Λ_{g,i}` (`1 <= i <= l`): blocks `l+1-i..=l` vanish; dimension
//!   `a_{l+1-i}`.
//!
//! with `Λ_{·,0} = P^n` and `Λ_{·,l+1} = ∅`. Arcs are tracked by the
//! valuation and leading coefficient of each coordinate, which is all a
//! `t -> 0` limit sees.
//!
//! Stratum of an arc: let `u_k` be the minimal valuation in block `k`.
//! `lo` is the least `k` minimising `u_k` (the unscaled limit lies in
//! `Λ_{f,lo}`), `hi` the greatest `k` minimising `u_k + μ_k` (the forward
//! limit lies in `Λ_{g,l-hi}`). Always `hi <= lo`. The arc meets the
//! exceptional divisor `F_i` in its interior when `hi = lo = i`; otherwise
//! it meets `F_hi ∩ ... ∩ F_lo` and is reported at `hi` with a tie flag.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BirresError {
    #[error("need l >= 1 cuts")]
    NoCuts,
    #[error("{mu} exponents for {cuts} cuts; expected one more exponent than cuts")]
    LengthMismatch { mu: usize, cuts: usize },
    #[error("exponents must start at 0 and strictly increase: {0:?}")]
    BadExponents(Vec<i64>),
    #[error("cuts must strictly increase within 0..{n}: {cuts:?}")]
    BadCuts { cuts: Vec<u32>, n: u32 },
    #[error("arc has {got} coordinates, map needs {want}")]
    ArcLength { got: usize, want: usize },
    #[error("arc coordinate {0} has zero leading coefficient")]
    ZeroCoefficient(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingMap {
    n: u32,
    mu: Vec<i64>,
    cuts: Vec<u32>,
}

impl ScalingMap {
    pub fn new(n: u32, mu: Vec<i64>, cuts: Vec<u32>) -> Result<Self, BirresError> {
        if cuts.is_empty() {
            return Err(BirresError::NoCuts);
        }
        if mu.len() != cuts.len() + 1 {
            return Err(BirresError::LengthMismatch { mu: mu.len(), cuts: cuts.len() });
        }
        if mu[0] != 0 || mu.windows(2).any(|w| w[0] >= w[1]) {
            return Err(BirresError::BadExponents(mu));
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) || *cuts.last().expect("nonempty") >= n {
            return Err(BirresError::BadCuts { cuts, n });
        }
        Ok(ScalingMap { n, mu, cuts })
    }

    /// Random map on `P^n` with `l` and gaps drawn from `rng`.
    pub fn random(n: u32, rng: &mut impl Rng) -> Self {
        let l = rng.gen_range(1..=n as usize);
        let mut pool: Vec<u32> = (0..n).collect();
        for i in 0..l {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        let mut cuts = pool[..l].to_vec();
        cuts.sort_unstable();
        let mut mu = vec![0i64];
        for _ in 0..l {
            let last = *mu.last().expect("nonempty");
            mu.push(last + rng.gen_range(1..=4));
        }
        ScalingMap::new(n, mu, cuts).expect("constructed valid")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> usize {
        self.cuts.len()
    }

    pub fn mu(&self) -> &[i64] {
        &self.mu
    }

    pub fn cuts(&self) -> &[u32] {
        &self.cuts
    }

    /// Coordinate range of block `k`.
    pub fn block(&self, k: usize) -> std::ops::RangeInclusive<usize> {
        let start = if k == 0 { 0 } else { self.cuts[k - 1] as usize + 1 };
        let end = if k == self.l() { self.n as usize } else { self.cuts[k] as usize };
        start..=end
    }

    pub fn block_of(&self, coord: usize) -> usize {
        self.cuts.iter().take_while(|&&a| (a as usize) < coord).count()
    }

    /// `Λ_{f,i}` for `0 <= i <= l+1`.
    pub fn lambda_f(&self, i: usize) -> CoordSubspace {
        self.vanishing_blocks(0..i)
    }

    /// `Λ_{g,i}` for `0 <= i <= l+1`.
    pub fn lambda_g(&self, i: usize) -> CoordSubspace {
        let l = self.l();
        self.vanishing_blocks((l + 1 - i)..(l + 1))
    }

    fn vanishing_blocks(&self, blocks: std::ops::Range<usize>) -> CoordSubspace {
        let mut live = vec![true; self.n as usize + 1];
        for k in blocks {
            for j in self.block(k) {
                live[j] = false;
            }
        }
        CoordSubspace { live }
    }
}

/// Coordinate subspace: the coordinates not forced to vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordSubspace {
    pub live: Vec<bool>,
}

impl CoordSubspace {
    /// Projective dimension; `-1` for the empty set.
    pub fn dim(&self) -> i64 {
        self.live.iter().filter(|&&b| b).count() as i64 - 1
    }

    pub fn disjoint(&self, other: &CoordSubspace) -> bool {
        self.live.iter().zip(&other.live).all(|(a, b)| !(a & b))
    }

    pub fn contains_point(&self, p: &[i64]) -> bool {
        p.iter().zip(&self.live).all(|(&x, &live)| live || x == 0)
    }

    /// Equations `z_j = 0`, for reports.
    pub fn equations(&self) -> Vec<usize> {
        self.live.iter().enumerate().filter(|(_, &b)| !b).map(|(j, _)| j).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagReport {
    pub map: ScalingMap,
    /// `dim Λ_{f,i}` for `i = 0..=l+1`.
    pub dims_f: Vec<i64>,
    pub dims_g: Vec<i64>,
    /// `f` equations for `1 <= i <= l`.
    pub f_equations: Vec<Vec<usize>>,
    pub g_equations: Vec<Vec<usize>>,
    pub formula_ok: bool,
    pub duality_ok: bool,
    pub disjoint_ok: bool,
    pub pair_sums_ok: bool,
    pub nested_ok: bool,
}

impl FlagReport {
    pub fn ok(&self) -> bool {
        self.formula_ok && self.duality_ok && self.disjoint_ok && self.pair_sums_ok && self.nested_ok
    }
}

pub fn flags(map: &ScalingMap) -> FlagReport {
    let l = map.l();
    let n = i64::from(map.n);
    let fs: Vec<CoordSubspace> = (0..=l + 1).map(|i| map.lambda_f(i)).collect();
    let gs: Vec<CoordSubspace> = (0..=l + 1).map(|i| map.lambda_g(i)).collect();
    let dims_f: Vec<i64> = fs.iter().map(CoordSubspace::dim).collect();
    let dims_g: Vec<i64> = gs.iter().map(CoordSubspace::dim).collect();

    let formula_ok = (1..=l).all(|i| {
        dims_f[i] == n - i64::from(map.cuts[i - 1]) - 1 && dims_g[i] == i64::from(map.cuts[l - i])
    }) && dims_f[0] == n
        && dims_g[0] == n
        && dims_f[l + 1] == -1
        && dims_g[l + 1] == -1;
    let duality_ok = (1..=l).all(|i| dims_f[i] + dims_g[l + 1 - i] == n - 1);
    let disjoint_ok = (1..=l).all(|i| fs[i].disjoint(&gs[l + 1 - i]));
    let pair_sums_ok =
        (0..=l).all(|i| dims_f[i] + dims_f[i + 1] + dims_g[l - i] + dims_g[l - i + 1] == 2 * (n - 1));
    let nested_ok = (0..=l).all(|i| dims_f[i] > dims_f[i + 1] && dims_g[i] > dims_g[i + 1]);

    FlagReport {
        map: map.clone(),
        f_equations: (1..=l).map(|i| fs[i].equations()).collect(),
        g_equations: (1..=l).map(|i| gs[i].equations()).collect(),
        dims_f,
        dims_g,
        formula_ok,
        duality_ok,
        disjoint_ok,
        pair_sums_ok,
        nested_ok,
    }
}

/// Germ of an arc: per coordinate `(valuation, leading coefficient)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub coords: Vec<(i64, i64)>,
}

impl Arc {
    pub fn new(coords: Vec<(i64, i64)>) -> Result<Self, BirresError> {
        if let Some(j) = coords.iter().position(|&(_, c)| c == 0) {
            return Err(BirresError::ZeroCoefficient(j));
        }
        Ok(Arc { coords }.normalized())
    }

    /// Shift so the minimum valuation is 0.
    pub fn normalized(mut self) -> Self {
        let m = self.coords.iter().map(|c| c.0).min().unwrap_or(0);
        for c in &mut self.coords {
            c.0 -= m;
        }
        self
    }

    pub fn times_t(mut self, k: i64) -> Self {
        for c in &mut self.coords {
            c.0 += k;
        }
        self
    }

    /// Limit as `t -> 0`: leading coefficients of minimal-valuation
    /// coordinates, zero elsewhere.
    pub fn limit(&self) -> Vec<i64> {
        let m = self.coords.iter().map(|c| c.0).min().unwrap_or(0);
        self.coords.iter().map(|&(v, c)| if v == m { c } else { 0 }).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

pub fn apply(map: &ScalingMap, arc: &Arc, dir: Direction) -> Result<Arc, BirresError> {
    let want = map.n as usize + 1;
    if arc.coords.len() != want {
        return Err(BirresError::ArcLength { got: arc.coords.len(), want });
    }
    let sign = match dir {
        Direction::Forward => 1,
        Direction::Inverse => -1,
    };
    let coords = arc
        .coords
        .iter()
        .enumerate()
        .map(|(j, &(v, c))| (v + sign * map.mu[map.block_of(j)], c))
        .collect();
    Ok(Arc { coords }.normalized())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcLimit {
    pub point: Vec<i64>,
    pub stratum: usize,
    pub tie: bool,
}

fn block_minima(map: &ScalingMap, arc: &Arc) -> Vec<i64> {
    (0..=map.l())
        .map(|k| map.block(k).map(|j| arc.coords[j].0).min().expect("blocks are nonempty"))
        .collect()
}

/// `(hi, lo)` for the arc as seen from the source side.
pub fn stratum_bounds(map: &ScalingMap, arc: &Arc) -> (usize, usize) {
    let u = block_minima(map, arc);
    let shifted: Vec<i64> = u.iter().zip(&map.mu).map(|(a, b)| a + b).collect();
    let smin = *shifted.iter().min().expect("l >= 1");
    let umin = *u.iter().min().expect("l >= 1");
    let hi = shifted.iter().rposition(|&x| x == smin).expect("min attained");
    let lo = u.iter().position(|&x| x == umin).expect("min attained");
    (hi, lo)
}

/// Limit of the image arc and the stratum the source arc lifts into.
///
/// For `Inverse`, the roles of the two sides swap: the stratum is computed
/// for the inverse map, whose exponents are `μ_l - μ_{l-k}` on reversed
/// blocks, and reported in the inverse map's own indexing.
pub fn arc_limit(map: &ScalingMap, arc: &Arc, dir: Direction) -> Result<ArcLimit, BirresError> {
    let image = apply(map, arc, dir)?;
    let (hi, lo) = match dir {
        Direction::Forward => stratum_bounds(map, arc),
        Direction::Inverse => {
            // t^{-μ_k} on block k equals t^{μ_l - μ_k} up to a global power,
            // i.e. the scaling map with blocks reversed.
            let (rev, rev_arc) = reversed(map, arc);
            stratum_bounds(&rev, &rev_arc)
        }
    };
    Ok(ArcLimit { point: image.limit(), stratum: hi, tie: hi != lo })
}

/// The inverse map written as a scaling map in reversed coordinates.
pub fn reversed(map: &ScalingMap, arc: &Arc) -> (ScalingMap, Arc) {
    let n = map.n;
    let l = map.l();
    let top = map.mu[l];
    let mu: Vec<i64> = (0..=l).map(|k| top - map.mu[l - k]).collect();
    let cuts: Vec<u32> = map.cuts.iter().rev().map(|&a| n - 1 - a).collect();
    let coords = arc.coords.iter().rev().copied().collect();
    (ScalingMap::new(n, mu, cuts).expect("reversal of a valid map"), Arc { coords })
}

/// Arc whose lift meets `F_i` in its interior, with random coefficients.
pub fn interior_arc(map: &ScalingMap, i: usize, rng: &mut impl Rng) -> Arc {
    let l = map.l();
    let mut coords = vec![(0i64, 1i64); map.n as usize + 1];
    for k in 0..=l {
        let floor = match k.cmp(&i) {
            std::cmp::Ordering::Less => (map.mu[i] - map.mu[k]).max(1),
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 0,
        };
        let u = if k == i { 0 } else { floor + rng.gen_range(0..=2) };
        let block: Vec<usize> = map.block(k).collect();
        let pinned = block[rng.gen_range(0..block.len())];
        for j in block {
            let v = if j == pinned { u } else { u + rng.gen_range(0..=2) };
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-9..=9);
            }
            coords[j] = (v, c);
        }
    }
    Arc { coords }.normalized()
}

/// `a` and `b` agree as projective points (both nonzero).
pub fn proj_eq(a: &[i64], b: &[i64]) -> bool {
    let nz = |v: &[i64]| v.iter().any(|&x| x != 0);
    if !nz(a) || !nz(b) || a.len() != b.len() {
        return false;
    }
    let (a, b): (Vec<i128>, Vec<i128>) = (a.iter().map(|&x| x as i128).collect(), b.iter().map(|&x| x as i128).collect());
    for i in 0..a.len() {
        for j in 0..a.len() {
            if a[i] * b[j] != a[j] * b[i] {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumStats {
    pub i: usize,
    pub samples: u64,
    pub stratum_ok: u64,
    pub landed_ok: u64,
    pub square_ok: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub map: ScalingMap,
    pub strata: Vec<StratumStats>,
    pub violations: Vec<String>,
}

impl CorrespondenceReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For arcs into each `F_i`: the forward limit lies in `Λ_{g,l-i}`, and
/// block `i` of the unscaled limit (the projection of `Λ_{f,i}` away from
/// `Λ_{f,i+1}`) equals block `i` of the forward limit (the projection of
/// `Λ_{g,l-i}` away from `Λ_{g,l-i+1}`).
pub fn stratum_correspondence(map: &ScalingMap, samples: u64, seed: u64) -> CorrespondenceReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = map.l();
    let mut strata: Vec<StratumStats> = (0..=l).map(|i| StratumStats { i, ..Default::default() }).collect();
    let mut violations = Vec::new();
    for s in 0..samples {
        let i = (s % (l as u64 + 1)) as usize;
        let arc = interior_arc(map, i, &mut rng);
        let st = &mut strata[i];
        st.samples += 1;
        let lim = arc_limit(map, &arc, Direction::Forward).expect("arc sized to map");
        if lim.stratum == i && !lim.tie {
            st.stratum_ok += 1;
        } else {
            violations.push(format!("arc {:?}: stratum {} tie {} expected {i}", arc.coords, lim.stratum, lim.tie));
        }
        if map.lambda_g(l - i).contains_point(&lim.point) {
            st.landed_ok += 1;
        } else {
            violations.push(format!("arc {:?}: forward limit {:?} outside Λ_g,{}", arc.coords, lim.point, l - i));
        }
        let src = arc.limit();
        let block: Vec<usize> = map.block(i).collect();
        let a: Vec<i64> = block.iter().map(|&j| src[j]).collect();
        let b: Vec<i64> = block.iter().map(|&j| lim.point[j]).collect();
        if map.lambda_f(i).contains_point(&src) && proj_eq(&a, &b) {
            st.square_ok += 1;
        } else {
            violations.push(format!("arc {:?}: block {i} of {src:?} vs {:?}", arc.coords, lim.point));
        }
    }
    CorrespondenceReport { map: map.clone(), strata, violations }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BirresSweep {
    pub maps: u64,
    pub flag_failures: Vec<FlagReport>,
    pub correspondence_maps: u64,
    pub arcs: u64,
    pub correspondence_failures: Vec<CorrespondenceReport>,
}

/// `maps` random maps with `n <= n_max` for the flag identities; the first
/// `corr_maps` of them also get `arcs_per_map` correspondence samples.
pub fn sweep(n_max: u32, maps: u64, corr_maps: u64, arcs_per_map: u64, seed: u64, exec: Exec) -> BirresSweep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let list: Vec<(u64, ScalingMap)> = (0..maps)
        .map(|k| {
            let n = rng.gen_range(1..=n_max);
            (k, ScalingMap::random(n, &mut rng))
        })
        .collect();
    let results = exec.map(list, |(k, m)| {
        let f = flags(&m);
        let c = (k < corr_maps).then(|| stratum_correspondence(&m, arcs_per_map, seed ^ k.wrapping_mul(0x9e37_79b9)));
        (f, c)
    });
    let mut out = BirresSweep {
        maps,
        flag_failures: Vec::new(),
        correspondence_maps: corr_maps.min(maps),
        arcs: 0,
        correspondence_failures: Vec::new(),
    };
    for (f, c) in results {
        if !f.ok() {
            out.flag_failures.push(f);
        }
        if let Some(c) = c {
            out.arcs += c.strata.iter().map(|s| s.samples).sum::<u64>();
            if !c.ok() {
                out.correspondence_failures.push(c);
            }
        }
    }
    out
}
