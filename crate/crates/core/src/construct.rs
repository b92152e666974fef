//! Greedy selection of vector pairs from a 2-spread and assembly of the
//! parity-check matrix.
//!
//! Every round picks one surviving plane of the spread and three of its
//! points, turns them into `u₁`, `u₂` and `u₀ = u₁ − u₂`, and then trims every
//! other surviving plane: a point is dropped once it lies in
//! `span{u_a^(i), u_b^(j)}` for the new pair `i` and any earlier pair `j`.
//! Planes left with fewer than three points leave the family. The pairs that
//! come out satisfy
//!
//! * C.1: `u₁^(i)`, `u₂^(i)` are independent,
//! * C.2: the planes of different pairs meet only in zero,
//! * C.3: any `u_a^(i)`, `u_b^(j)`, `u_c^(t)` with `i < j < t` are independent,
//!
//! which is exactly what makes every six columns of the assembled matrix
//! independent.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{vectors_rank, EchelonBasis, Matrix};
use crate::spread::{ProjectivePoint, Spread, Vec4, DIM};

/// Ordered pairs `(u₁^(i), u₂^(i))` in GF(q)^4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSequence {
    field: Field,
    pairs: Vec<(Vec4, Vec4)>,
}

impl VectorSequence {
    pub fn new(field: &Field, pairs: Vec<(Vec4, Vec4)>) -> Result<Self> {
        let q = field.order();
        if pairs.iter().flat_map(|(a, b)| a.iter().chain(b)).any(|&x| x >= q) {
            return Err(Error::Format("sequence entry outside the field".into()));
        }
        Ok(VectorSequence { field: field.clone(), pairs })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn pairs(&self) -> &[(Vec4, Vec4)] {
        &self.pairs
    }

    /// Number of pairs, L.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `u_label^(i)` for label 0, 1 or 2, where `u₀ = u₁ − u₂`.
    pub fn u(&self, i: usize, label: usize) -> Vec4 {
        let (u1, u2) = &self.pairs[i];
        match label {
            0 => std::array::from_fn(|k| self.field.sub(u1[k], u2[k])),
            1 => *u1,
            2 => *u2,
            _ => panic!("label must be 0, 1 or 2"),
        }
    }

    fn push(&mut self, u1: Vec4, u2: Vec4) {
        self.pairs.push((u1, u2));
    }

    /// Mutable access to the pairs, for building deliberately broken inputs.
    pub fn pairs_mut(&mut self) -> &mut Vec<(Vec4, Vec4)> {
        &mut self.pairs
    }
}

/// The three basis vectors chosen from one plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub u0: Vec<u32>,
    pub u1: Vec<u32>,
    pub u2: Vec<u32>,
}

/// Turns three distinct, coplanar points `⟨v₁⟩, ⟨v₂⟩, ⟨v₃⟩` into
/// `u₁ = α·v₁`, `u₂ = −β·v₂`, `u₀ = u₁ − u₂`, where `v₃ = α·v₁ + β·v₂`.
pub fn triple_basis(field: &Field, v1: &[u32], v2: &[u32], v3: &[u32]) -> Result<Triple> {
    let n = v1.len();
    if v2.len() != n || v3.len() != n {
        return Err(Error::Dimension("points of different lengths".into()));
    }
    let f = field;
    let det = |i: usize, j: usize| f.sub(f.mul(v1[i], v2[j]), f.mul(v1[j], v2[i]));
    let (i, j) = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .find(|&(i, j)| det(i, j) != 0)
        .ok_or_else(|| Error::InvalidParams("first two points coincide".into()))?;
    let d = f.inv(det(i, j));
    let alpha = f.mul(f.sub(f.mul(v3[i], v2[j]), f.mul(v3[j], v2[i])), d);
    let beta = f.mul(f.sub(f.mul(v1[i], v3[j]), f.mul(v1[j], v3[i])), d);
    let coplanar = (0..n).all(|k| f.add(f.mul(alpha, v1[k]), f.mul(beta, v2[k])) == v3[k]);
    if !coplanar || alpha == 0 || beta == 0 {
        return Err(Error::InvalidParams("points are not three distinct points of one plane".into()));
    }
    let u1: Vec<u32> = v1.iter().map(|&x| f.mul(alpha, x)).collect();
    let u2: Vec<u32> = v2.iter().map(|&x| f.neg(f.mul(beta, x))).collect();
    let u0 = u1.iter().zip(&u2).map(|(&a, &b)| f.sub(a, b)).collect();
    Ok(Triple { u0, u1, u2 })
}

/// How the arbitrary choices of the algorithm are made.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "seed")]
pub enum Policy {
    /// Smallest plane id, then the three canonically smallest points.
    Lex,
    /// Uniform choices from a ChaCha8 stream seeded with the given value.
    Seeded(u64),
}

enum Chooser {
    Lex,
    Seeded(Box<ChaCha8Rng>),
}

impl Chooser {
    fn new(policy: Policy) -> Self {
        match policy {
            Policy::Lex => Chooser::Lex,
            Policy::Seeded(seed) => Chooser::Seeded(Box::new(ChaCha8Rng::seed_from_u64(seed))),
        }
    }

    fn pick_set(&mut self, len: usize) -> usize {
        match self {
            Chooser::Lex => 0,
            Chooser::Seeded(rng) => rng.gen_range(0..len),
        }
    }

    fn pick_three(&mut self, len: usize) -> [usize; 3] {
        match self {
            Chooser::Lex => [0, 1, 2],
            Chooser::Seeded(rng) => {
                let mut idx = sample(rng, len, 3).into_vec();
                idx.sort_unstable();
                [idx[0], idx[1], idx[2]]
            }
        }
    }
}

/// Picks three of `points` according to `policy` and returns their basis.
/// Lex takes the first three in the order given.
pub fn choose_triple(field: &Field, points: &[&[u32]], policy: Policy) -> Result<Triple> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let [a, b, c] = Chooser::new(policy).pick_three(points.len());
    triple_basis(field, points[a], points[b], points[c])
}

/// One surviving plane and the points still available in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    pub plane: usize,
    pub points: Vec<ProjectivePoint>,
}

/// The family of candidate sets, kept in ascending plane id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateFamily {
    pub sets: Vec<CandidateSet>,
    pub initial_size: usize,
}

impl CandidateFamily {
    pub fn from_spread(spread: &Spread) -> Self {
        let sets: Vec<CandidateSet> = (0..spread.len())
            .map(|i| CandidateSet { plane: spread.planes()[i].id, points: spread.projective_points(i) })
            .filter(|s| s.points.len() >= 3)
            .collect();
        let mut family = CandidateFamily { initial_size: spread.len(), sets };
        family.sets.sort_by_key(|s| s.plane);
        family
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    fn take_plane(&mut self, plane: usize) -> Option<CandidateSet> {
        let pos = self.sets.iter().position(|s| s.plane == plane)?;
        Some(self.sets.remove(pos))
    }
}

/// What one trim step removed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrimRecord {
    /// `(plane id, removed point representatives)` for every set that lost points.
    pub removals: Vec<(usize, Vec<Vec4>)>,
    /// Plane ids of sets dropped for having fewer than three points left.
    pub discarded: Vec<usize>,
}

/// Removes from every surviving set the points lying in
/// `span{u_a^(i), u_b^(j)}`, where `i` is the newest pair of `seq` and `j`
/// ranges over the earlier ones, then discards sets with fewer than three
/// points. A sequence with a single pair leaves the family untouched.
pub fn trim(family: &mut CandidateFamily, seq: &VectorSequence) -> TrimRecord {
    let mut record = TrimRecord::default();
    let i = seq.len();
    if i < 2 || family.is_empty() {
        return record;
    }
    let f = seq.field();
    let newest = i - 1;
    let mut spans = Vec::with_capacity(9 * newest);
    for j in 0..newest {
        for a in 0..3 {
            for b in 0..3 {
                let mut basis = EchelonBasis::new(DIM);
                basis.insert(f, &seq.u(newest, a));
                basis.insert(f, &seq.u(j, b));
                spans.push(basis);
            }
        }
    }
    for set in &mut family.sets {
        let (kept, removed): (Vec<ProjectivePoint>, Vec<ProjectivePoint>) =
            set.points.iter().partition(|pt| !spans.iter().any(|s| s.contains(f, pt.rep())));
        if !removed.is_empty() {
            record.removals.push((set.plane, removed.iter().map(|p| *p.rep()).collect()));
            set.points = kept;
        }
    }
    family.sets.retain(|s| {
        let keep = s.points.len() >= 3;
        if !keep {
            record.discarded.push(s.plane);
        }
        keep
    });
    record
}

/// One choose-and-trim round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub plane: usize,
    pub points: [Vec4; 3],
    #[serde(flatten)]
    pub trim: TrimRecord,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub q: u32,
    pub policy: Policy,
    pub rounds: Vec<Round>,
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub sequence: VectorSequence,
    pub trace: ConstructionTrace,
    pub warnings: Vec<String>,
}

impl Construction {
    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }
}

/// Runs the greedy construction on the field-reduction spread of `field`.
pub fn run_algorithm1(field: &Field, policy: Policy) -> Construction {
    run_on_spread(&Spread::build(field), policy)
}

pub fn run_on_spread(spread: &Spread, policy: Policy) -> Construction {
    let field = spread.field();
    let mut warnings = Vec::new();
    if field.order() < 4 {
        let msg = format!("q = {}: guarantee requires q >= 4", field.order());
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let mut chooser = Chooser::new(policy);
    let mut family = CandidateFamily::from_spread(spread);
    let mut seq = VectorSequence { field: field.clone(), pairs: Vec::new() };
    let mut rounds = Vec::new();
    while !family.is_empty() {
        let set = family.sets.remove(chooser.pick_set(family.len()));
        let idx = chooser.pick_three(set.points.len());
        let pts = idx.map(|k| *set.points[k].rep());
        let t =
            triple_basis(field, &pts[0], &pts[1], &pts[2]).expect("distinct points of one plane always give a basis");
        seq.push(to_vec4(&t.u1), to_vec4(&t.u2));
        let record = trim(&mut family, &seq);
        rounds.push(Round { plane: set.plane, points: pts, trim: record });
    }
    Construction { sequence: seq, trace: ConstructionTrace { q: field.order(), policy, rounds }, warnings }
}

/// Re-executes a trace against the spread, checking every recorded choice
/// and removal, and returns the reproduced sequence.
pub fn replay(spread: &Spread, trace: &ConstructionTrace) -> Result<VectorSequence> {
    let field = spread.field();
    if trace.q != field.order() {
        return Err(Error::ReplayMismatch { round: 0, reason: format!("trace is for q = {}", trace.q) });
    }
    let mut family = CandidateFamily::from_spread(spread);
    let mut seq = VectorSequence { field: field.clone(), pairs: Vec::new() };
    for (r, round) in trace.rounds.iter().enumerate() {
        let mismatch = |reason: String| Error::ReplayMismatch { round: r + 1, reason };
        let set = family
            .take_plane(round.plane)
            .ok_or_else(|| mismatch(format!("plane {} is not in the family", round.plane)))?;
        for p in &round.points {
            if !set.points.iter().any(|x| x.rep() == p) {
                return Err(mismatch(format!("point {p:?} is not available in plane {}", round.plane)));
            }
        }
        let [v1, v2, v3] = &round.points;
        let t = triple_basis(field, v1, v2, v3).map_err(|e| mismatch(e.to_string()))?;
        seq.push(to_vec4(&t.u1), to_vec4(&t.u2));
        let record = trim(&mut family, &seq);
        if record != round.trim {
            return Err(mismatch("trim removals differ".into()));
        }
    }
    if !family.is_empty() {
        return Err(Error::ReplayMismatch {
            round: trace.rounds.len(),
            reason: format!("{} candidate sets remain", family.len()),
        });
    }
    Ok(seq)
}

fn to_vec4(v: &[u32]) -> Vec4 {
    v.try_into().expect("spread vectors have length 4")
}

/// Three pair indices and the vector label (0, 1 or 2) taken from each.
pub type TripleWitness = ((usize, usize, usize), (usize, usize, usize));

/// First violation found for each condition; indices are zero-based pair indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub pairs: usize,
    /// Pair whose two vectors are dependent.
    pub c1: Option<usize>,
    /// Two pairs whose planes intersect.
    pub c2: Option<(usize, usize)>,
    /// `((i, j, t), (a, b, c))` with `u_a^(i), u_b^(j), u_c^(t)` dependent.
    pub c3: Option<TripleWitness>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.c1.is_none() && self.c2.is_none() && self.c3.is_none()
    }
}

/// Brute-force check of C.1 (every pair), C.2 (every two pairs) and C.3 (every
/// three pairs with all 27 label choices).
pub fn verify_conditions(seq: &VectorSequence) -> ConditionReport {
    let f = seq.field();
    let l = seq.len();
    let c1 = (0..l).find(|&i| {
        let (a, b) = &seq.pairs[i];
        vectors_rank(f, &[a, b]) < 2
    });
    let c2 = (0..l).flat_map(|i| (i + 1..l).map(move |j| (i, j))).find(|&(i, j)| {
        let (a, b) = &seq.pairs[i];
        let (c, d) = &seq.pairs[j];
        vectors_rank(f, &[a, b, c, d]) < DIM
    });
    let labelled: Vec<[Vec4; 3]> = (0..l).map(|i| [seq.u(i, 0), seq.u(i, 1), seq.u(i, 2)]).collect();
    let c3 = (0..l).into_par_iter().find_map_first(|i| {
        for j in i + 1..l {
            for t in j + 1..l {
                for a in 0..3 {
                    for b in 0..3 {
                        for c in 0..3 {
                            let vs = [&labelled[i][a][..], &labelled[j][b], &labelled[t][c]];
                            if vectors_rank(f, &vs) < 3 {
                                return Some(((i, j, t), (a, b, c)));
                            }
                        }
                    }
                }
            }
        }
        None
    });
    ConditionReport { pairs: l, c1, c2, c3 }
}

/// The `(L+4) × 3L` matrix with group indicators on top and
/// `u₁^(t) u₂^(t) 0` in the bottom four rows of group `t`.
pub fn assemble_parity_check(seq: &VectorSequence) -> Result<Matrix> {
    if seq.len() < 3 {
        return Err(Error::InvalidParams(format!("need at least 3 pairs, got {}", seq.len())));
    }
    let report = verify_conditions(seq);
    if !report.passed() {
        return Err(Error::ConditionsViolated(format!("{report:?}")));
    }
    Ok(assemble_unchecked(seq))
}

/// Same layout as [`assemble_parity_check`] without checking the conditions.
pub fn assemble_unchecked(seq: &VectorSequence) -> Matrix {
    let l = seq.len();
    let mut h = Matrix::zeros(seq.field(), l + DIM, 3 * l);
    for (t, (u1, u2)) in seq.pairs.iter().enumerate() {
        for c in 0..3 {
            h.set(t, 3 * t + c, 1);
        }
        for k in 0..DIM {
            h.set(l + k, 3 * t, u1[k]);
            h.set(l + k, 3 * t + 1, u2[k]);
        }
    }
    h
}

/// `max(⌈√2·q/3⌉, 3)`, the guaranteed number of pairs for q ≥ 4, computed
/// without floating point: the ceiling is the least m with 9m² ≥ 2q².
pub fn guaranteed_pairs(q: u64) -> u64 {
    let target = 2 * q * q;
    let mut m = 0;
    while 9 * m * m < target {
        m += 1;
    }
    m.max(3)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn triple_in_characteristic_two() {
        let f = gf(4);
        let t = choose_triple(&f, &[&[1, 0], &[0, 1], &[1, 1]], Policy::Lex).unwrap();
        assert_eq!((t.u1, t.u2, t.u0), (vec![1, 0], vec![0, 1], vec![1, 1]));
    }

    #[test]
    fn triple_over_gf7() {
        let f = gf(7);
        let t = choose_triple(&f, &[&[1, 0], &[0, 1], &[1, 3]], Policy::Lex).unwrap();
        assert_eq!((t.u1, t.u2, t.u0), (vec![1, 0], vec![0, 4], vec![1, 3]));
    }

    #[test]
    fn triple_needs_three_points() {
        let f = gf(7);
        assert_eq!(choose_triple(&f, &[&[1, 0], &[0, 1]], Policy::Lex), Err(Error::TooFewPoints(2)));
        assert!(triple_basis(&f, &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]).is_err());
    }

    #[test]
    fn first_trim_is_a_noop() {
        let f = gf(4);
        let spread = Spread::build(&f);
        let mut family = CandidateFamily::from_spread(&spread);
        let set = family.sets.remove(0);
        let pts: Vec<&[u32]> = set.points.iter().map(|p| &p.rep()[..]).collect();
        let t = choose_triple(&f, &pts, Policy::Lex).unwrap();
        let seq = VectorSequence::new(&f, vec![(to_vec4(&t.u1), to_vec4(&t.u2))]).unwrap();
        let before = family.clone();
        assert_eq!(trim(&mut family, &seq), TrimRecord::default());
        assert_eq!(family, before);
    }

    #[test]
    fn trim_discards_sets_below_three() {
        let f = gf(4);
        let spread = Spread::build(&f);
        let c = run_algorithm1(&f, Policy::Lex);
        assert!(c.trace.rounds.iter().any(|r| !r.trim.discarded.is_empty()));
        // replay and check discarded sets really had < 3 points left
        let mut family = CandidateFamily::from_spread(&spread);
        let mut seq = VectorSequence::new(&f, vec![]).unwrap();
        for (i, round) in c.trace.rounds.iter().enumerate() {
            family.take_plane(round.plane).unwrap();
            seq.push(c.sequence.pairs[i].0, c.sequence.pairs[i].1);
            let snapshot = family.clone();
            let rec = trim(&mut family, &seq);
            for plane in &rec.discarded {
                let before = snapshot.sets.iter().find(|s| s.plane == *plane).unwrap().points.len();
                let removed = rec.removals.iter().find(|(p, _)| p == plane).map_or(0, |(_, r)| r.len());
                assert!(before - removed < 3);
            }
        }
    }

    // Each span{u_a^(i), u_b^(j)} holds at most q+1 points, two of which are
    // ⟨u_a^(i)⟩ and ⟨u_b^(j)⟩ in already-used planes, so at most q−1 can be
    // taken from the surviving sets.
    #[test]
    fn each_span_removes_at_most_q_minus_one() {
        let f = gf(4);
        for seed in 0..10 {
            let c = run_algorithm1(&f, Policy::Seeded(seed));
            let spread = Spread::build(&f);
            let mut family = CandidateFamily::from_spread(&spread);
            let mut seq = VectorSequence::new(&f, vec![]).unwrap();
            for (i, round) in c.trace.rounds.iter().enumerate() {
                family.take_plane(round.plane).unwrap();
                seq.push(c.sequence.pairs[i].0, c.sequence.pairs[i].1);
                for j in 0..i {
                    for a in 0..3 {
                        for b in 0..3 {
                            let (ua, ub) = (seq.u(i, a), seq.u(j, b));
                            let hit = family
                                .sets
                                .iter()
                                .flat_map(|s| &s.points)
                                .filter(|p| vectors_rank(&f, &[&ua, &ub, p.rep()]) == 2)
                                .count();
                            assert!(hit < f.order() as usize, "seed {seed} round {i}: {hit}");
                        }
                    }
                }
                trim(&mut family, &seq);
            }
        }
    }

    #[test]
    fn lex_run_over_gf4() {
        let f = gf(4);
        let c = run_algorithm1(&f, Policy::Lex);
        assert!(c.len() >= 3);
        assert!(c.warnings.is_empty());
        assert!(verify_conditions(&c.sequence).passed());
    }

    #[test]
    fn small_field_warns_and_terminates() {
        let f = gf(2);
        let c = run_algorithm1(&f, Policy::Lex);
        assert!(c.len() <= 5);
        assert_eq!(c.warnings.len(), 1);
    }

    #[test]
    fn repeated_plane_breaks_c2() {
        let f = gf(5);
        let mut seq = run_algorithm1(&f, Policy::Lex).sequence;
        let first = seq.pairs[0];
        seq.pairs_mut()[1] = first;
        let report = verify_conditions(&seq);
        assert_eq!(report.c2, Some((0, 1)));
    }

    #[test]
    fn planted_dependence_breaks_c3() {
        let f = gf(7);
        let mut seq = run_algorithm1(&f, Policy::Lex).sequence;
        assert!(seq.len() >= 3);
        let s = std::array::from_fn(|k| f.add(seq.pairs[0].0[k], seq.pairs[1].0[k]));
        seq.pairs_mut()[2].0 = s;
        let report = verify_conditions(&seq);
        assert_eq!(report.c3, Some(((0, 1, 2), (1, 1, 1))));
    }

    #[test]
    fn dependent_pair_breaks_c1() {
        let f = gf(5);
        let mut seq = run_algorithm1(&f, Policy::Lex).sequence;
        let u1 = seq.pairs[1].0;
        seq.pairs_mut()[1].1 = u1.map(|x| f.mul(x, 3));
        assert_eq!(verify_conditions(&seq).c1, Some(1));
    }

    #[test]
    fn parity_check_layout() {
        let f = gf(4);
        let seq = run_algorithm1(&f, Policy::Lex).sequence;
        let l = seq.len();
        let h = assemble_parity_check(&seq).unwrap();
        assert_eq!((h.rows(), h.cols()), (l + 4, 3 * l));
        for t in 0..l {
            assert_eq!(h.row(t).iter().filter(|&&x| x != 0).count(), 3);
            assert!((0..3).all(|c| h.get(t, 3 * t + c) == 1));
            assert!((l..l + 4).all(|r| h.get(r, 3 * t + 2) == 0));
        }
    }

    #[test]
    fn assembly_rejects_short_or_broken_sequences() {
        let f = gf(4);
        let seq = run_algorithm1(&f, Policy::Lex).sequence;
        let short = VectorSequence::new(&f, seq.pairs()[..2].to_vec()).unwrap();
        assert!(assemble_parity_check(&short).is_err());
        let mut bad = seq.clone();
        let first = bad.pairs[0];
        bad.pairs_mut()[1] = first;
        assert!(matches!(assemble_parity_check(&bad), Err(Error::ConditionsViolated(_))));
    }

    #[test]
    fn replay_reproduces_and_detects_tampering() {
        let f = gf(5);
        let spread = Spread::build(&f);
        let c = run_on_spread(&spread, Policy::Seeded(11));
        assert_eq!(replay(&spread, &c.trace).unwrap(), c.sequence);

        let mut bad = c.trace.clone();
        bad.rounds[1].trim.discarded.push(999);
        assert!(matches!(replay(&spread, &bad), Err(Error::ReplayMismatch { round: 2, .. })));

        let mut truncated = c.trace.clone();
        truncated.rounds.pop();
        assert!(replay(&spread, &truncated).is_err());
    }

    #[test]
    fn determinism() {
        let f = gf(7);
        for policy in [Policy::Lex, Policy::Seeded(3)] {
            let a = run_algorithm1(&f, policy);
            let b = run_algorithm1(&f, policy);
            assert_eq!(a.sequence, b.sequence);
            assert_eq!(a.trace, b.trace);
        }
    }

    #[test]
    fn guarantee_thresholds() {
        // ⌈√2·q/3⌉ by hand: q=4: 1.886→2, 5: 2.357→3, 7: 3.300→4, 8: 3.771→4, 9: 4.243→5
        let got: Vec<u64> = [4, 5, 7, 8, 9].iter().map(|&q| guaranteed_pairs(q)).collect();
        assert_eq!(got, vec![3, 3, 4, 4, 5]);
        assert_eq!(guaranteed_pairs(30), 15); // 14.142 → 15
    }
}
