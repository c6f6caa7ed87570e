//! Truncated formal power series in Chern roots.
//!
//! Verifies the splitting-principle identity
//! `c_top(V) = ch(lambda_-1(V^v)) * td(V)` on formal roots, and realizes the
//! degree-zero Chow specialization of the Euler class over a point.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::Result;
use crate::linalg::{ratio, Rational};
use crate::witten::{ke_class, Instance};

/// Polynomial in `variables` formal roots, truncated at total degree `cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    variables: usize,
    cap: u32,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl TruncatedSeries {
    pub fn zero(variables: usize, cap: u32) -> Self {
        TruncatedSeries {
            variables,
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(variables: usize, cap: u32, c: Rational) -> Self {
        let mut s = Self::zero(variables, cap);
        if !c.is_zero() {
            s.terms.insert(vec![0; variables], c);
        }
        s
    }

    pub fn one(variables: usize, cap: u32) -> Self {
        Self::constant(variables, cap, Rational::one())
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms
            .get(exponents)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    fn insert(&mut self, exponents: Vec<u32>, c: Rational) {
        if exponents.iter().sum::<u32>() > self.cap || c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(exponents)
            .or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            // avoid keeping explicit zeros
            let dead: Vec<Vec<u32>> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!((self.variables, self.cap), (other.variables, other.cap));
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), -c.clone());
        }
        out
    }

    /// Product, re-truncated at the cap.
    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!((self.variables, self.cap), (other.variables, other.cap));
        let mut out = TruncatedSeries::zero(self.variables, self.cap);
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().sum();
            for (eb, cb) in &other.terms {
                let db: u32 = eb.iter().sum();
                if da + db > self.cap {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert(e, ca * cb);
            }
        }
        out
    }

    /// The monomial `x_1 x_2 ... x_n`.
    pub fn top_monomial(variables: usize, cap: u32) -> Self {
        let mut s = Self::zero(variables, cap);
        s.insert(vec![1; variables], Rational::one());
        s
    }

    /// Substitute the single-variable coefficient list `coeffs[j] t^j` into
    /// variable `var`.
    fn from_univariate(variables: usize, cap: u32, var: usize, coeffs: &[Rational]) -> Self {
        let mut s = Self::zero(variables, cap);
        for (j, c) in coeffs.iter().enumerate() {
            if j as u32 > cap {
                break;
            }
            let mut e = vec![0; variables];
            e[var] = j as u32;
            s.insert(e, c.clone());
        }
        s
    }
}

/// Coefficients of `1 - e^(-t)` through degree `cap`.
fn one_minus_exp_neg(cap: u32) -> Vec<Rational> {
    let mut coeffs = vec![Rational::zero(); cap as usize + 1];
    let mut factorial: i64 = 1;
    for j in 1..=cap as i64 {
        factorial *= j;
        coeffs[j as usize] = ratio(if j % 2 == 1 { 1 } else { -1 }, factorial);
    }
    coeffs
}

/// Coefficients of `t / (1 - e^(-t))` through degree `cap`, by exact series
/// inversion of `(1 - e^(-t)) / t`.
fn todd_factor(cap: u32) -> Vec<Rational> {
    // g(t) = (1 - e^(-t)) / t = sum_j (-1)^j t^j / (j+1)!
    let mut g = vec![Rational::zero(); cap as usize + 1];
    let mut factorial: i64 = 1;
    for j in 0..=cap as i64 {
        factorial *= j + 1;
        g[j as usize] = ratio(if j % 2 == 0 { 1 } else { -1 }, factorial);
    }
    // invert: q * g = 1
    let mut q = vec![Rational::zero(); cap as usize + 1];
    q[0] = Rational::one();
    for j in 1..=cap as usize {
        let mut acc = Rational::zero();
        for l in 1..=j {
            acc += &g[l] * &q[j - l];
        }
        q[j] = -acc / &g[0];
    }
    q
}

/// `prod_i (1 - e^(-x_i))`: the Chern character of the alternating sum of
/// exterior powers of the dual bundle, on formal roots.
pub fn ch_lambda_minus_one_dual(n: usize, cap: u32) -> TruncatedSeries {
    let factor_coeffs = one_minus_exp_neg(cap);
    let mut acc = TruncatedSeries::one(n, cap);
    for var in 0..n {
        let f = TruncatedSeries::from_univariate(n, cap, var, &factor_coeffs);
        acc = acc.mul(&f);
    }
    acc
}

/// `prod_i x_i / (1 - e^(-x_i))`, truncated at `cap`; constant term 1.
pub fn todd(n: usize, cap: u32) -> TruncatedSeries {
    let factor_coeffs = todd_factor(cap);
    let mut acc = TruncatedSeries::one(n, cap);
    for var in 0..n {
        let f = TruncatedSeries::from_univariate(n, cap, var, &factor_coeffs);
        acc = acc.mul(&f);
    }
    acc
}

/// `ch(lambda_-1(V^v)) * td(V) = x_1 ... x_n` exactly up to degree `cap`.
pub fn verify_ctop_identity(n: usize, cap: u32) -> bool {
    assert!(cap as usize >= n, "cap must reach the top monomial");
    let product = ch_lambda_minus_one_dual(n, cap).mul(&todd(n, cap));
    product == TruncatedSeries::top_monomial(n, cap)
}

/// Degree-zero realization of the top Chern class over a point: the Chern
/// character specializes to the virtual rank and every Todd factor to 1.
pub fn cw_point(inst: &Instance) -> Result<i64> {
    Ok(ke_class(inst)?.virtual_rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    /// Bernoulli numbers with B_1 = +1/2, from the defining recurrence
    /// `sum_(j<=m) C(m+1, j) B_j = m + 1`.
    fn bernoulli_plus(upto: usize) -> Vec<Rational> {
        let mut b: Vec<Rational> = Vec::with_capacity(upto + 1);
        for m in 0..=upto {
            let mut acc = rat(m as i64 + 1);
            for (j, bj) in b.iter().enumerate() {
                let binom = crate::multilinear::binomial(m + 1, j) as i64;
                acc -= rat(binom) * bj;
            }
            b.push(acc / rat(m as i64 + 1));
        }
        b
    }

    #[test]
    fn todd_factor_matches_bernoulli_expansion() {
        // t/(1-e^(-t)) = sum B_j^+ t^j / j!
        let cap = 6;
        let q = todd_factor(cap);
        let b = bernoulli_plus(cap as usize);
        let mut factorial: i64 = 1;
        for j in 0..=cap as usize {
            if j > 0 {
                factorial *= j as i64;
            }
            assert_eq!(q[j], &b[j] / &rat(factorial), "degree {j}");
        }
    }

    #[test]
    fn todd_low_degrees() {
        let t = todd(1, 2);
        assert_eq!(t.coefficient(&[0]), rat(1));
        assert_eq!(t.coefficient(&[1]), ratio(1, 2));
        assert_eq!(t.coefficient(&[2]), ratio(1, 12));
        assert_eq!(todd(0, 3), TruncatedSeries::one(0, 3));
    }

    #[test]
    fn todd_is_multiplicative() {
        let t2 = todd(2, 4);
        let t1a = {
            let f = one_var_todd(2, 4, 0);
            let g = one_var_todd(2, 4, 1);
            f.mul(&g)
        };
        assert_eq!(t2, t1a);
    }

    fn one_var_todd(n: usize, cap: u32, var: usize) -> TruncatedSeries {
        TruncatedSeries::from_univariate(n, cap, var, &todd_factor(cap))
    }

    #[test]
    fn ch_lambda_examples() {
        assert_eq!(ch_lambda_minus_one_dual(0, 3), TruncatedSeries::one(0, 3));
        let s = ch_lambda_minus_one_dual(1, 2);
        assert_eq!(s.coefficient(&[0]), rat(0));
        assert_eq!(s.coefficient(&[1]), rat(1));
        assert_eq!(s.coefficient(&[2]), ratio(-1, 2));
    }

    #[test]
    fn ch_lambda_matches_subset_alternating_sum() {
        // oracle: sum over subsets S of (-1)^|S| e^(-sum_(i in S) x_i)
        let (n, cap) = (2usize, 3u32);
        let mut acc = TruncatedSeries::zero(n, cap);
        for mask in 0..(1u32 << n) {
            let mut term = TruncatedSeries::one(n, cap);
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    // e^(-x_i)
                    let mut coeffs = one_minus_exp_neg(cap);
                    for c in coeffs.iter_mut() {
                        *c = -c.clone();
                    }
                    coeffs[0] = rat(1);
                    term = term.mul(&TruncatedSeries::from_univariate(n, cap, i, &coeffs));
                }
            }
            let sign = if mask.count_ones() % 2 == 0 {
                rat(1)
            } else {
                rat(-1)
            };
            acc = acc.add(&term.mul(&TruncatedSeries::constant(n, cap, sign)));
        }
        assert_eq!(acc, ch_lambda_minus_one_dual(n, cap));
    }

    #[test]
    fn ctop_identity_holds() {
        for n in 0..=3usize {
            for cap in n as u32..=6 {
                assert!(verify_ctop_identity(n, cap), "n = {n}, cap = {cap}");
            }
        }
    }
}
