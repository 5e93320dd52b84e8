//! Exact integral LLL reduction and Babai's nearest-plane rounding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Lovász parameter `δ = DELTA_NUM / DELTA_DEN`.
const DELTA_NUM: i64 = 99;
const DELTA_DEN: i64 = 100;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `round(a / b)` for `b > 0`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let num: BigInt = a * 2 + b;
    num.div_floor(&(b * 2))
}

struct Integral {
    basis: Vec<Vec<BigInt>>,
    /// `d[0] = 1`, `d[i]` the Gram determinant of the first `i` vectors.
    d: Vec<BigInt>,
    /// `lambda[i][j] = d[j+1] μ_{ij}`, `j < i`.
    lambda: Vec<Vec<BigInt>>,
}

impl Integral {
    /// `λ` and `d` are indexed with the first vector at 0; `d` has one extra
    /// leading entry so `d[i+1]` belongs to vector `i`.
    fn red(&mut self, k: usize, l: usize) {
        let dl = self.d[l + 1].clone();
        let twice: BigInt = &self.lambda[k][l] * 2;
        if twice.abs() > dl {
            let q = round_div(&self.lambda[k][l], &dl);
            let bl = self.basis[l].clone();
            for (x, y) in self.basis[k].iter_mut().zip(&bl) {
                *x -= &q * y;
            }
            self.lambda[k][l] -= &q * &dl;
            for i in 0..l {
                let v = &q * &self.lambda[l][i];
                self.lambda[k][i] -= v;
            }
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.basis.swap(k, k - 1);
        for j in 0..k - 1 {
            let t = self.lambda[k][j].clone();
            self.lambda[k][j] = self.lambda[k - 1][j].clone();
            self.lambda[k - 1][j] = t;
        }
        let lam = self.lambda[k][k - 1].clone();
        let b = (&self.d[k - 1] * &self.d[k + 1] + &lam * &lam) / &self.d[k];
        for i in k + 1..=kmax {
            let t = self.lambda[i][k].clone();
            self.lambda[i][k] =
                (&self.d[k + 1] * &self.lambda[i][k - 1] - &lam * &t) / &self.d[k];
            self.lambda[i][k - 1] = (&b * &t + &lam * &self.lambda[i][k]) / &self.d[k + 1];
        }
        self.d[k] = b;
    }
}

/// LLL-reduces linearly independent integer rows in place.
pub fn lll(basis: &mut Vec<Vec<BigInt>>) {
    let n = basis.len();
    if n <= 1 {
        return;
    }
    let mut st = Integral {
        basis: std::mem::take(basis),
        d: vec![BigInt::zero(); n + 1],
        lambda: vec![vec![BigInt::zero(); n]; n],
    };
    st.d[0] = BigInt::from(1);
    st.d[1] = dot(&st.basis[0], &st.basis[0]);
    let mut k = 1usize;
    let mut kmax = 0usize;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&st.basis[k], &st.basis[j]);
                for i in 0..j {
                    u = (&st.d[i + 1] * &u - &st.lambda[k][i] * &st.lambda[j][i]) / &st.d[i];
                }
                if j < k {
                    st.lambda[k][j] = u;
                } else {
                    assert!(!u.is_zero(), "basis vectors are linearly dependent");
                    st.d[k + 1] = u;
                }
            }
        }
        st.red(k, k - 1);
        let lam = &st.lambda[k][k - 1];
        let lhs = &st.d[k + 1] * &st.d[k - 1] * DELTA_DEN;
        let rhs = &st.d[k] * &st.d[k] * DELTA_NUM - lam * lam * DELTA_DEN;
        if lhs < rhs {
            st.swap(k, kmax);
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                st.red(k, l);
            }
            k += 1;
        }
    }
    *basis = st.basis;
}

fn to_f64_scaled(v: &[BigInt], shift: u64) -> Vec<f64> {
    v.iter()
        .map(|x| (x >> shift).to_f64().unwrap_or(0.0))
        .collect()
}

/// Lattice vector close to `target` by nearest-plane rounding on a reduced
/// basis.
pub fn babai(basis: &[Vec<BigInt>], target: &[BigInt]) -> Vec<BigInt> {
    let n = basis.len();
    // Common scale keeps the floating Gram–Schmidt in range.
    let bits = basis
        .iter()
        .flatten()
        .chain(target)
        .map(|x| x.bits())
        .max()
        .unwrap_or(0);
    let shift = bits.saturating_sub(900);
    let rows: Vec<Vec<f64>> = basis.iter().map(|b| to_f64_scaled(b, shift)).collect();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = rows[i].clone();
        for s in &star {
            let ss: f64 = s.iter().map(|x| x * x).sum();
            let mu: f64 = v.iter().zip(s).map(|(a, b)| a * b).sum::<f64>() / ss;
            for (x, y) in v.iter_mut().zip(s) {
                *x -= mu * y;
            }
        }
        star.push(v);
    }
    let mut residual: Vec<BigInt> = target.to_vec();
    for i in (0..n).rev() {
        let r = to_f64_scaled(&residual, shift);
        let ss: f64 = star[i].iter().map(|x| x * x).sum();
        let c = (r.iter().zip(&star[i]).map(|(a, b)| a * b).sum::<f64>() / ss).round();
        if c != 0.0 {
            let c = BigInt::from(c as i128);
            for (x, y) in residual.iter_mut().zip(&basis[i]) {
                *x -= &c * y;
            }
        }
    }
    target.iter().zip(&residual).map(|(t, r)| t - r).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn det3(b: &[Vec<BigInt>]) -> BigInt {
        &b[0][0] * (&b[1][1] * &b[2][2] - &b[1][2] * &b[2][1])
            - &b[0][1] * (&b[1][0] * &b[2][2] - &b[1][2] * &b[2][0])
            + &b[0][2] * (&b[1][0] * &b[2][1] - &b[1][1] * &b[2][0])
    }

    #[test]
    fn reduces_textbook_basis() {
        let mut b = rows(&[&[1, 1, 1], &[-1, 0, 2], &[3, 5, 6]]);
        let before = det3(&b).abs();
        lll(&mut b);
        assert_eq!(det3(&b).abs(), before);
        let norms: Vec<BigInt> = b.iter().map(|r| dot(r, r)).collect();
        assert!(norms.iter().all(|n| *n <= BigInt::from(5)), "{b:?}");
    }

    #[test]
    fn finds_integer_relation() {
        // Rows (1, 0, ⌊√2·10^6⌉), (0, 1, 10^6 ...) expose a short relation.
        let s = 1_000_000i64;
        let mut b = rows(&[&[1, 0, 1_414_214], &[0, 1, s]]);
        lll(&mut b);
        let shortest = b.iter().map(|r| dot(r, r)).min().unwrap();
        assert!(shortest < BigInt::from(2_000_000i64));
    }

    #[test]
    fn babai_recovers_lattice_point() {
        let mut b = rows(&[&[7, 0, 0], &[3, 11, 0], &[1, 2, 13]]);
        lll(&mut b);
        let point: Vec<BigInt> = [2 * 7 + 3 - 1, 11 - 2, -13].iter().map(|&x: &i64| BigInt::from(x)).collect();
        let target: Vec<BigInt> = point.iter().map(|x| x + 1).collect();
        assert_eq!(babai(&b, &target), point);
    }
}
