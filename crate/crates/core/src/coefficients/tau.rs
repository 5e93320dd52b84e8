//! Ramanujan's `τ(n)` from `Δ(q) = q Π_{n≥1} (1 - q^n)^{24}`, in exact integers.
//!
//! `Π(1 - q^n)^{24}` is assembled as the eighth power of Jacobi's
//! `Π(1 - q^n)^3 = Σ_{k≥0} (-1)^k (2k+1) q^{k(k+1)/2}`; the cube is sparse,
//! so each of the seven multiplications costs `O(N^{3/2})`.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauTable {
    tau: Vec<i128>,
}

fn jacobi_cube(len: usize) -> Vec<(usize, i128)> {
    let mut terms = Vec::new();
    let mut k = 0usize;
    loop {
        let e = k * (k + 1) / 2;
        if e >= len {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        terms.push((e, sign * (2 * k as i128 + 1)));
        k += 1;
    }
    terms
}

impl TauTable {
    /// `τ(1..=limit)`.
    pub fn new(limit: usize) -> Self {
        let len = limit.max(1);
        let cube = jacobi_cube(len);
        let mut acc = vec![0i128; len];
        for &(e, c) in &cube {
            acc[e] = c;
        }
        for _ in 1..8 {
            let mut next = vec![0i128; len];
            for (i, &a) in acc.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for &(e, c) in &cube {
                    if i + e >= len {
                        break;
                    }
                    next[i + e] += a * c;
                }
            }
            acc = next;
        }
        let mut tau = Vec::with_capacity(len + 1);
        tau.push(0);
        tau.extend(acc.into_iter().take(limit));
        Self { tau }
    }

    pub fn limit(&self) -> usize {
        self.tau.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<i128> {
        if n == 0 {
            return None;
        }
        self.tau.get(n).copied()
    }
}
