//! Linear codes given by a parity-check matrix with disjoint local groups:
//! generator derivation, encoding, exact minimum distance and erasure repair.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{dot, EchelonBasis, Matrix};

/// Default number of codewords [`min_weight_codeword`] may enumerate.
pub const DEFAULT_ENUM_BUDGET: u128 = 1_000_000;

/// Environment variable that overrides [`DEFAULT_ENUM_BUDGET`].
pub const ENUM_BUDGET_ENV: &str = "LRC_ENUM_BUDGET";

/// A received word; `None` marks an erased symbol.
pub type Word = [Option<u32>];

#[derive(Debug, Clone)]
pub struct LrcCode {
    h: Matrix,
    g: Matrix,
    groups: Vec<Vec<usize>>,
    /// Per group, the coefficients of a dual codeword supported on that group.
    checks: Vec<Vec<u32>>,
    /// Group index of each coordinate.
    group_of: Vec<usize>,
}

impl LrcCode {
    /// Derives the generator from `h` and finds the repair groups. Without
    /// `groups`, the leading rows of `h` must have pairwise disjoint supports
    /// of equal size covering every coordinate.
    pub fn from_parity_check(h: Matrix, groups: Option<Vec<Vec<usize>>>) -> Result<Self> {
        let n = h.cols();
        let kernel = h.kernel_basis();
        if kernel.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let rows: Vec<Vec<u32>> = kernel.into_iter().map(|v| v.into_inner()).collect();
        let g = Matrix::from_rows(h.field(), &rows)?;
        let (groups, checks) = match groups {
            None => detect_groups(&h)?,
            Some(groups) => {
                validate_partition(&groups, n)?;
                let checks = groups.iter().map(|grp| local_check(&g, grp)).collect::<Result<Vec<_>>>()?;
                (groups, checks)
            }
        };
        let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
        if sizes.iter().any(|&s| s != sizes[0] || s < 2) {
            return Err(Error::NoGroupStructure(format!("unequal or trivial group sizes {sizes:?}")));
        }
        let mut group_of = vec![0; n];
        for (t, grp) in groups.iter().enumerate() {
            for &i in grp {
                group_of[i] = t;
            }
        }
        Ok(LrcCode { h, g, groups, checks, group_of })
    }

    pub fn field(&self) -> &Field {
        self.h.field()
    }

    pub fn parity_check(&self) -> &Matrix {
        &self.h
    }

    pub fn generator(&self) -> &Matrix {
        &self.g
    }

    pub fn len(&self) -> usize {
        self.h.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dimension(&self) -> usize {
        self.g.rows()
    }

    /// Locality r: group size minus one.
    pub fn locality(&self) -> usize {
        self.groups[0].len() - 1
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group_of(&self, pos: usize) -> &[usize] {
        &self.groups[self.group_of[pos]]
    }

    pub fn is_codeword(&self, c: &[u32]) -> bool {
        self.h.mul_vec(c).map(|s| s.iter().all(|&x| x == 0)).unwrap_or(false)
    }

    /// `msg · G`.
    pub fn encode(&self, msg: &[u32]) -> Result<Vec<u32>> {
        if msg.len() != self.dimension() {
            return Err(Error::Dimension(format!("message length {} for k = {}", msg.len(), self.dimension())));
        }
        if let Some(&bad) = msg.iter().find(|&&x| x >= self.field().order()) {
            return Err(Error::NotAnElement { value: u64::from(bad), q: self.field().order() });
        }
        self.g.vec_mul(msg)
    }

    /// Recovers the erased symbol at `pos` from the other members of its group.
    pub fn repair_local(&self, word: &Word, pos: usize) -> Result<LocalRepair> {
        self.check_word(word)?;
        if word[pos].is_some() {
            return Err(Error::InvalidParams(format!("position {pos} is not erased")));
        }
        let f = self.field();
        let t = self.group_of[pos];
        let (grp, check) = (&self.groups[t], &self.checks[t]);
        let mut acc = 0;
        let mut own = 0;
        let mut helpers = Vec::with_capacity(grp.len() - 1);
        for (&i, &coef) in grp.iter().zip(check) {
            if i == pos {
                own = coef;
                continue;
            }
            let v = word[i].ok_or(Error::LocalRepairBlocked { pos, partner: i })?;
            acc = f.add(acc, f.mul(coef, v));
            helpers.push(i);
        }
        Ok(LocalRepair { value: f.neg(f.div(acc, own)), helpers })
    }

    /// Recovers all erasures at once by solving `H_E · x = −H_K · c_K`.
    pub fn repair_global(&self, word: &Word) -> Result<GlobalRepair> {
        self.check_word(word)?;
        let f = self.field();
        let erased: Vec<usize> = (0..word.len()).filter(|&i| word[i].is_none()).collect();
        let known: Vec<u32> = word.iter().map(|x| x.unwrap_or(0)).collect();
        if erased.is_empty() {
            return Ok(GlobalRepair { codeword: known, helpers_read: word.len() });
        }
        let rhs: Vec<u32> = self.h.mul_vec(&known)?.into_iter().map(|x| f.neg(x)).collect();
        let sub = self.h.select_columns(&erased);
        let x = sub.solve_unique(&rhs).ok_or(Error::Unrecoverable(erased.len()))?;
        let mut codeword = known;
        for (&i, v) in erased.iter().zip(x) {
            codeword[i] = v;
        }
        Ok(GlobalRepair { codeword, helpers_read: word.len() - erased.len() })
    }

    fn check_word(&self, word: &Word) -> Result<()> {
        if word.len() != self.len() {
            return Err(Error::Dimension(format!("word length {} for n = {}", word.len(), self.len())));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalRepair {
    pub value: u32,
    pub helpers: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalRepair {
    pub codeword: Vec<u32>,
    pub helpers_read: usize,
}

fn validate_partition(groups: &[Vec<usize>], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &i in groups.iter().flatten() {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::DuplicateIndex(i));
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::NoGroupStructure(format!("coordinate {missing} is in no group")));
    }
    Ok(())
}

type Groups = (Vec<Vec<usize>>, Vec<Vec<u32>>);

fn detect_groups(h: &Matrix) -> Result<Groups> {
    let n = h.cols();
    let mut covered = vec![false; n];
    let mut count = 0;
    let (mut groups, mut checks) = (Vec::new(), Vec::new());
    for r in 0..h.rows() {
        if count == n {
            break;
        }
        let support: Vec<usize> = (0..n).filter(|&c| h.get(r, c) != 0).collect();
        if support.is_empty() || support.iter().any(|&c| covered[c]) {
            return Err(Error::NoGroupStructure(format!("row {r} is not disjoint from the rows above it")));
        }
        for &c in &support {
            covered[c] = true;
        }
        count += support.len();
        checks.push(support.iter().map(|&c| h.get(r, c)).collect());
        groups.push(support);
    }
    if count < n {
        return Err(Error::NoGroupStructure("leading rows do not cover every coordinate".into()));
    }
    Ok((groups, checks))
}

/// A dual codeword supported exactly on `grp`: a vector `y` with
/// `G[:, grp] · y = 0` and no zero entries.
fn local_check(g: &Matrix, grp: &[usize]) -> Result<Vec<u32>> {
    let basis = g.select_columns(grp).kernel_basis();
    let f = g.field();
    let full = |v: &[u32]| v.iter().all(|&x| x != 0);
    if let Some(v) = basis.iter().find(|v| full(v.as_slice())) {
        return Ok(v.as_slice().to_vec());
    }
    if let Some(first) = basis.first() {
        let sum = basis[1..].iter().fold(first.as_slice().to_vec(), |acc, v| {
            acc.iter().zip(v.as_slice()).map(|(&a, &b)| f.add(a, b)).collect()
        });
        if full(&sum) {
            return Ok(sum);
        }
    }
    Err(Error::NoGroupStructure(format!("no dual codeword with support {grp:?}")))
}

/// Result of a capped distance search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Distance {
    Exact(usize),
    /// Every set of at most `value − 1` columns is independent.
    AtLeast(usize),
}

impl Distance {
    pub fn exact(self) -> Option<usize> {
        match self {
            Distance::Exact(d) => Some(d),
            Distance::AtLeast(_) => None,
        }
    }
}

impl std::fmt::Display for Distance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Distance::Exact(d) => write!(f, "{d}"),
            Distance::AtLeast(d) => write!(f, ">= {d}"),
        }
    }
}

/// Smallest number of linearly dependent columns of the parity-check matrix,
/// searched up to `cap`.
pub fn min_distance(code: &LrcCode, cap: usize) -> Distance {
    min_dependent_columns(code.parity_check(), cap)
}

/// Searches sizes 1, 2, … up to `cap`, returning the first size at which some
/// set of columns is dependent. Each size is an exhaustive, early-exit search
/// that extends an incremental echelon basis column by column.
pub fn min_dependent_columns(h: &Matrix, cap: usize) -> Distance {
    let f = h.field();
    let n = h.cols();
    let cols: Vec<Vec<u32>> = (0..n).map(|c| h.column(c)).collect();
    for w in 1..=cap.min(n) {
        let found = AtomicBool::new(false);
        let hit = (0..n).into_par_iter().any(|first| {
            let mut basis = EchelonBasis::new(h.rows());
            search(f, &cols, first, w, &mut basis, &found)
        });
        if hit {
            return Distance::Exact(w);
        }
    }
    Distance::AtLeast(cap.min(n) + 1)
}

/// Does some `w`-subset whose smallest column is `start` contain a dependent
/// last column? The prefixes are independent because smaller sizes were
/// already searched.
fn search(f: &Field, cols: &[Vec<u32>], start: usize, w: usize, basis: &mut EchelonBasis, found: &AtomicBool) -> bool {
    if found.load(Ordering::Relaxed) {
        return true;
    }
    if basis.len() + 1 == w {
        if basis.contains(f, &cols[start]) {
            found.store(true, Ordering::Relaxed);
            return true;
        }
        return false;
    }
    if !basis.insert(f, &cols[start]) {
        // only reachable for w = 1 prefixes; a dependent prefix means a smaller set
        found.store(true, Ordering::Relaxed);
        return true;
    }
    let remaining = w - basis.len();
    let hit = (start + 1..=cols.len().saturating_sub(remaining)).any(|next| search(f, cols, next, w, basis, found));
    basis.pop();
    hit
}

fn enum_budget() -> u128 {
    std::env::var(ENUM_BUDGET_ENV).ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_ENUM_BUDGET)
}

/// A nonzero codeword of minimum Hamming weight, found by encoding every
/// message whose first nonzero entry is 1 (scalar multiples share weights).
pub fn min_weight_codeword(code: &LrcCode) -> Result<Vec<u32>> {
    min_weight_in_row_space(code.generator())
}

/// Minimum-weight nonzero vector in the row space of `g`, whose rows must be
/// independent.
pub fn min_weight_in_row_space(g: &Matrix) -> Result<Vec<u32>> {
    let q = u128::from(g.field().order());
    let k = g.rows();
    if k == 0 {
        return Err(Error::ZeroDimension);
    }
    let needed = q.checked_pow(k as u32).unwrap_or(u128::MAX);
    let budget = enum_budget();
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let f = g.field();
    let gcols: Vec<Vec<u32>> = (0..g.cols()).map(|c| g.column(c)).collect();
    let best = (0..k)
        .into_par_iter()
        .flat_map_iter(|lead| {
            // messages (0, …, 0, 1, x_{lead+1}, …, x_{k−1})
            let tail = k - lead - 1;
            let count = (q as u64).pow(tail as u32);
            (0..count).map(move |code_idx| {
                let mut msg = vec![0u32; k];
                msg[lead] = 1;
                let mut rest = code_idx;
                for slot in msg.iter_mut().skip(lead + 1) {
                    *slot = (rest % q as u64) as u32;
                    rest /= q as u64;
                }
                msg
            })
        })
        .map(|msg| {
            let cw: Vec<u32> = gcols.iter().map(|c| dot(f, &msg, c)).collect();
            (cw.iter().filter(|&&x| x != 0).count(), cw)
        })
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .expect("k >= 1");
    Ok(best.1)
}

/// Minimum weight over all nonzero codewords; an independent check of
/// [`min_distance`].
pub fn min_weight_oracle(code: &LrcCode) -> Result<usize> {
    Ok(min_weight_codeword(code)?.iter().filter(|&&x| x != 0).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    // [6,3] code over GF(2) with groups {0,1,2}, {3,4,5}
    fn small_code() -> LrcCode {
        let f = gf(2);
        let h =
            Matrix::from_rows(&f, &[vec![1, 1, 1, 0, 0, 0], vec![0, 0, 0, 1, 1, 1], vec![1, 0, 0, 1, 0, 0]]).unwrap();
        LrcCode::from_parity_check(h, None).unwrap()
    }

    #[test]
    fn generator_is_orthogonal() {
        let c = small_code();
        assert_eq!(c.dimension(), 3);
        let prod = c.generator().mul(&c.parity_check().transpose()).unwrap();
        assert!(prod.to_rows().iter().flatten().all(|&x| x == 0));
        assert_eq!(c.generator().rank(), 3);
        assert_eq!(c.locality(), 2);
    }

    #[test]
    fn identity_is_zero_dimensional() {
        let f = gf(3);
        assert!(matches!(LrcCode::from_parity_check(Matrix::identity(&f, 4), None), Err(Error::ZeroDimension)));
    }

    #[test]
    fn missing_structure_detected() {
        let f = gf(2);
        let h = Matrix::from_rows(&f, &[vec![1, 1, 0, 0], vec![0, 1, 1, 1]]).unwrap();
        assert!(matches!(LrcCode::from_parity_check(h, None), Err(Error::NoGroupStructure(_))));
    }

    #[test]
    fn explicit_groups() {
        let c = small_code();
        let h = c.parity_check().clone();
        let c2 = LrcCode::from_parity_check(h.clone(), Some(vec![vec![0, 1, 2], vec![3, 4, 5]])).unwrap();
        let cw = c2.encode(&[1, 0, 1]).unwrap();
        let mut word: Vec<Option<u32>> = cw.iter().map(|&x| Some(x)).collect();
        word[4] = None;
        assert_eq!(c2.repair_local(&word, 4).unwrap().value, cw[4]);
        assert!(LrcCode::from_parity_check(h.clone(), Some(vec![vec![0, 1, 2], vec![3, 4]])).is_err());
        assert!(LrcCode::from_parity_check(h, Some(vec![vec![0, 1, 2], vec![2, 3, 4, 5]])).is_err());
    }

    #[test]
    fn encode_checks() {
        let c = small_code();
        assert_eq!(c.encode(&[0, 0, 0]).unwrap(), vec![0; 6]);
        assert!(c.encode(&[1, 0]).is_err());
        assert!(c.encode(&[2, 0, 0]).is_err());
        let mut all = std::collections::BTreeSet::new();
        for m in 0..8u32 {
            let cw = c.encode(&[m & 1, (m >> 1) & 1, (m >> 2) & 1]).unwrap();
            assert!(c.is_codeword(&cw));
            all.insert(cw);
        }
        assert_eq!(all.len(), 8);
    }

    #[test]
    fn distance_of_small_code() {
        let c = small_code();
        // H has column 1 = column 2, so d = 2
        assert_eq!(min_distance(&c, 8), Distance::Exact(2));
        assert_eq!(min_weight_oracle(&c).unwrap(), 2);
        assert_eq!(min_distance(&c, 1), Distance::AtLeast(2));
    }

    #[test]
    fn zero_column_gives_distance_one() {
        let f = gf(3);
        let h = Matrix::from_rows(&f, &[vec![1, 1, 0, 0], vec![0, 0, 1, 1], vec![1, 2, 0, 0]]).unwrap();
        let c = LrcCode::from_parity_check(h, None).unwrap();
        assert_eq!(min_distance(&c, 4), Distance::Exact(2));
        assert_eq!(min_weight_oracle(&c).unwrap(), 2);
    }

    #[test]
    fn local_repair_blocked_by_partner() {
        let c = small_code();
        let cw = c.encode(&[1, 1, 0]).unwrap();
        let mut word: Vec<Option<u32>> = cw.iter().map(|&x| Some(x)).collect();
        word[0] = None;
        word[1] = None;
        assert_eq!(c.repair_local(&word, 0), Err(Error::LocalRepairBlocked { pos: 0, partner: 1 }));
        word[1] = Some(cw[1]);
        let rep = c.repair_local(&word, 0).unwrap();
        assert_eq!(rep.value, cw[0]);
        assert_eq!(rep.helpers, vec![1, 2]);
    }

    #[test]
    fn global_repair_and_failure() {
        let c = small_code();
        let cw = c.encode(&[1, 0, 1]).unwrap();
        let full: Vec<Option<u32>> = cw.iter().map(|&x| Some(x)).collect();
        assert_eq!(c.repair_global(&full).unwrap().codeword, cw);
        let mut word = full.clone();
        word[1] = None;
        assert_eq!(c.repair_global(&word).unwrap().codeword, cw);
        // columns 1 and 2 coincide: erasing both is ambiguous
        word[2] = None;
        assert_eq!(c.repair_global(&word), Err(Error::Unrecoverable(2)));
    }

    #[test]
    fn budget_enforced() {
        let f = gf(2);
        let mut rows = vec![vec![0u32; 24]; 2];
        rows[0][..12].fill(1);
        rows[1][12..].fill(1);
        let c = LrcCode::from_parity_check(Matrix::from_rows(&f, &rows).unwrap(), None).unwrap();
        assert_eq!(c.dimension(), 22);
        assert!(matches!(min_weight_oracle(&c), Err(Error::BudgetExceeded { .. })));
    }
}
