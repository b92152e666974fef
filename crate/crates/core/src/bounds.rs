//! Parameter bounds for LRCs with disjoint repair groups, and the
//! optimal / almost-optimal classification.
//!
//! Every bound that ends in an integer is evaluated with integer power
//! comparisons. The only floating-point quantities are the real-valued
//! forms reported next to their exact integer caps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::prime_power;

/// `(n, k, d, r)_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: u64,
    pub k: u64,
    pub d: u64,
    pub r: u64,
    pub q: u64,
}

impl CodeParams {
    pub fn new(n: u64, k: u64, d: u64, r: u64, q: u64) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_string()));
        if !(1..=n).contains(&k) {
            return bad("need 1 <= k <= n");
        }
        if !(1..=n).contains(&d) {
            return bad("need 1 <= d <= n");
        }
        if !(1..=k).contains(&r) {
            return bad("need 1 <= r <= k");
        }
        if prime_power(q).is_none() {
            return Err(Error::NotPrimePower(q));
        }
        Ok(CodeParams { n, k, d, r, q })
    }

    /// Number of repair groups `n/(r+1)`, when it divides evenly.
    pub fn groups(&self) -> Option<u64> {
        self.n.is_multiple_of(self.r + 1).then(|| self.n / (self.r + 1))
    }

    /// `u = L·r − k`, the number of non-local parity rows.
    pub fn global_parities(&self) -> Option<i64> {
        self.groups().map(|l| (l * self.r) as i64 - self.k as i64)
    }
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// `n − k − ⌈k/r⌉ + 2`.
pub fn singleton_like(n: u64, k: u64, r: u64) -> i64 {
    n as i64 - k as i64 - ceil_div(k, r) as i64 + 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Optimal,
    AlmostOptimal,
    Neither,
    Infeasible,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::Optimal => "optimal",
            Classification::AlmostOptimal => "almost-optimal",
            Classification::Neither => "neither",
            Classification::Infeasible => "infeasible",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyResult {
    pub classification: Classification,
    /// Whether `n − k − n/(r+1) = d − 2 − ⌊(d−2)/(r+1)⌋`; `None` unless (r+1) | n.
    pub eq2_holds: Option<bool>,
}

/// Compares `d` with the Singleton-like bound. The result does not depend on
/// q; the impossibility rule for `d − 2 ≡ r (mod r+1)` is pure arithmetic.
pub fn classify(p: &CodeParams) -> ClassifyResult {
    let bound = singleton_like(p.n, p.k, p.r);
    let d = p.d as i64;
    let divisible = p.n.is_multiple_of(p.r + 1);
    let eq2_holds = divisible
        .then(|| p.n as i64 - p.k as i64 - (p.n / (p.r + 1)) as i64 == d - 2 - (d - 2).div_euclid(p.r as i64 + 1));
    let forbidden = divisible && p.d >= 2 && (p.d - 2) % (p.r + 1) == p.r;
    let classification = if d > bound || (d == bound && forbidden) {
        Classification::Infeasible
    } else if d == bound {
        Classification::Optimal
    } else if d == bound - 1 {
        Classification::AlmostOptimal
    } else {
        Classification::Neither
    };
    ClassifyResult { classification, eq2_holds }
}

/// Least `u ≥ 0` with `den·q^u ≥ num`.
fn least_power_at_least(q: u64, num: u128, den: u128) -> u32 {
    let mut u = 0;
    let mut pow: u128 = den;
    while pow < num {
        pow = pow.saturating_mul(q as u128);
        u += 1;
    }
    u
}

/// `⌈log_q(q + (q−1)q(rn/2 − r))⌉`, as the least u with
/// `2q^u ≥ 2q + (q−1)q(rn − 2r)`.
pub fn eq3_log_term(n: u64, r: u64, q: u64) -> u32 {
    let (q128, n128, r128) = (q as u128, n as u128, r as u128);
    let num = 2 * q128 + (q128 - 1) * q128 * (r128 * n128 - 2 * r128);
    least_power_at_least(q, num, 2)
}

/// Dimension cap for `d ≥ 7` with disjoint groups:
/// `rn/(r+1) − ⌈log_q(q + (q−1)q(rn/2 − r))⌉`.
pub fn dim_bound_eq3(n: u64, r: u64, q: u64) -> Result<i64> {
    if r == 0 || !n.is_multiple_of(r + 1) {
        return Err(Error::InvalidParams(format!("r+1 = {} does not divide n = {n}", r + 1)));
    }
    Ok((r * n / (r + 1)) as i64 - i64::from(eq3_log_term(n, r, q)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WangBound {
    pub value: f64,
    pub floor: i64,
}

/// `rn/(r+1) − log_q(1 + (q−1)rn/2 + (r−1)r(q−1)(q−2)n/6)`. The floor is
/// exact: it equals `rn/(r+1)` minus the least u with `6q^u ≥ 6·(argument)`.
pub fn wang_bound(n: u64, r: u64, q: u64) -> Result<WangBound> {
    if r == 0 || !n.is_multiple_of(r + 1) {
        return Err(Error::InvalidParams(format!("r+1 = {} does not divide n = {n}", r + 1)));
    }
    let (qq, nn, rr) = (q as u128, n as u128, r as u128);
    let six_arg = 6 + 3 * (qq - 1) * rr * nn + (rr - 1) * rr * (qq - 1) * (qq - 2) * nn;
    let head = (r * n / (r + 1)) as i64;
    let floor = head - i64::from(least_power_at_least(q, six_arg, 6));
    let value = head as f64 - (six_arg as f64 / 6.0).ln() / (q as f64).ln();
    Ok(WangBound { value, floor })
}

/// Length cap `q² + q + 3` for almost optimal `(3L, 2L−4, 7, 2)_q` codes.
pub fn length_bound_eq5(q: u64) -> u64 {
    q * q + q + 3
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorLengthBounds {
    /// `a = d − 4(⌈d/4⌉ − 1)`.
    pub a: u64,
    pub guruswami: f64,
    pub chen: f64,
}

/// The two earlier length bounds for optimal LRCs with disjoint groups.
/// At `d = 7, r = 2` they are `3q⁴/(2(q−1))` and `(q⁴−1)/(q−1)`.
pub fn prior_length_bounds(d: u64, r: u64, q: u64) -> Result<PriorLengthBounds> {
    if d < 5 || r == 0 || q < 2 {
        return Err(Error::InvalidParams("need d >= 5, r >= 1, q >= 2".into()));
    }
    let a = d - 4 * (ceil_div(d, 4) - 1);
    let (df, af, rf, qf) = (d as f64, a as f64, r as f64, q as f64);
    let lead = (rf + 1.0) / rf * (df - af) / (4.0 * (qf - 1.0));
    let guruswami = match d % 4 {
        1 | 2 => lead * qf.powf(4.0 * (df - 2.0) / (df - af)),
        // d ≡ 3, 0 (mod 4)
        _ => lead * qf.powf(4.0 * (df - 3.0) / (df - af)),
    };
    let exponent = d - 2 - (d - 2) / (r + 1);
    let chen = 2.0 / rf * (qf.powi(exponent as i32) - 1.0) / (qf - 1.0);
    Ok(PriorLengthBounds { a, guruswami, chen })
}

/// Smallest prime power `≥ x`.
pub fn phi(x: u64) -> u64 {
    (x.max(2)..).find(|&m| prime_power(m).is_some()).expect("prime powers are unbounded")
}

/// Distance cap for `r = 2, n = 3L, k = 2(L−2)`: 7 when `n > q + 4`,
/// otherwise no cap beyond the Singleton-like bound.
pub fn cor1_distance_cap(n: u64, k: u64, q: u64, r: u64) -> Result<Option<u64>> {
    if r != 2 || !n.is_multiple_of(3) || n < 6 || k != 2 * (n / 3 - 2) {
        return Err(Error::InvalidParams("expected r = 2, n = 3L, k = 2(L-2)".into()));
    }
    Ok((n > q + 4).then_some(7))
}

/// What `bounds` reports for one parameter set. Fields that need `k` or `d`
/// are absent when those are not given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: u64,
    pub k: Option<u64>,
    pub d: Option<u64>,
    pub r: u64,
    pub q: u64,
    pub singleton_d_max: Option<i64>,
    pub eq3_k_max: Option<i64>,
    pub eq3_attained: Option<bool>,
    pub eq5_n_max: u64,
    pub wang_k_max: Option<f64>,
    pub wang_k_floor: Option<i64>,
    pub guruswami_n_max: Option<f64>,
    pub chen_n_max: Option<f64>,
    pub cor1_d_max: Option<u64>,
    pub eq2_holds: Option<bool>,
    /// Field-free classification.
    pub classification: Option<Classification>,
    /// Classification after also applying the field-size distance cap.
    pub classification_at_q: Option<Classification>,
}

impl BoundsReport {
    pub fn compute(n: u64, k: Option<u64>, d: Option<u64>, r: u64, q: u64) -> Result<Self> {
        if prime_power(q).is_none() {
            return Err(Error::NotPrimePower(q));
        }
        if r == 0 || n == 0 {
            return Err(Error::InvalidParams("need n, r >= 1".into()));
        }
        let divisible = n.is_multiple_of(r + 1);
        let eq3_k_max = divisible.then(|| dim_bound_eq3(n, r, q)).transpose()?;
        let wang = divisible.then(|| wang_bound(n, r, q)).transpose()?;
        let prior = d.filter(|&d| d >= 5).map(|d| prior_length_bounds(d, r, q)).transpose()?;
        let cor1 = k.and_then(|k| cor1_distance_cap(n, k, q, r).ok().flatten());
        let (mut classification, mut classification_at_q, mut eq2_holds) = (None, None, None);
        if let (Some(k), Some(d)) = (k, d) {
            let c = classify(&CodeParams::new(n, k, d, r, q)?);
            classification = Some(c.classification);
            eq2_holds = c.eq2_holds;
            classification_at_q = Some(match cor1 {
                Some(cap) if d > cap => Classification::Infeasible,
                _ => c.classification,
            });
        }
        Ok(BoundsReport {
            n,
            k,
            d,
            r,
            q,
            singleton_d_max: k.map(|k| singleton_like(n, k, r)),
            eq3_k_max,
            eq3_attained: k.zip(eq3_k_max).map(|(k, m)| k as i64 == m),
            eq5_n_max: length_bound_eq5(q),
            wang_k_max: wang.map(|w| w.value),
            wang_k_floor: wang.map(|w| w.floor),
            guruswami_n_max: prior.map(|p| p.guruswami),
            chen_n_max: prior.map(|p| p.chen),
            cor1_d_max: cor1,
            eq2_holds,
            classification,
            classification_at_q,
        })
    }

    /// Two-column aligned text rendering.
    pub fn to_table(&self) -> String {
        fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
            v.as_ref().map_or_else(|| "-".to_string(), |x| x.to_string())
        }
        fn optf(v: &Option<f64>) -> String {
            v.map_or_else(|| "-".to_string(), |x| format!("{x:.4}"))
        }
        let rows = [
            ("n", self.n.to_string()),
            ("k", opt(&self.k)),
            ("d", opt(&self.d)),
            ("r", self.r.to_string()),
            ("q", self.q.to_string()),
            ("singleton_d_max", opt(&self.singleton_d_max)),
            ("eq3_k_max", opt(&self.eq3_k_max)),
            ("eq3_attained", opt(&self.eq3_attained)),
            ("eq5_n_max", self.eq5_n_max.to_string()),
            ("wang_k_max", optf(&self.wang_k_max)),
            ("wang_k_floor", opt(&self.wang_k_floor)),
            ("guruswami_n_max", optf(&self.guruswami_n_max)),
            ("chen_n_max", optf(&self.chen_n_max)),
            ("cor1_d_max", opt(&self.cor1_d_max)),
            ("eq2_holds", opt(&self.eq2_holds)),
            ("classification", opt(&self.classification)),
            ("classification_at_q", opt(&self.classification_at_q)),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
    }
}
