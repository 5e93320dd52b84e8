//! Small-integer number theory used throughout the crate: prime sieves,
//! factorizations, exact integer roots.

/// Smallest-prime-factor table for `0..=n`. Entries 0 and 1 are 0.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(n: usize) -> Self {
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Self { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] as usize == n
    }

    pub fn smallest_factor(&self, n: usize) -> usize {
        self.spf[n] as usize
    }

    /// Prime factorization as `(p, e)` pairs in increasing `p`.
    pub fn factor(&self, mut n: usize) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    pub fn primes(&self) -> impl Iterator<Item = usize> + '_ {
        (2..self.spf.len()).filter(move |&i| self.spf[i] as usize == i)
    }
}

pub fn primes_up_to(n: usize) -> Vec<usize> {
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Exact integer `k`-th root: returns `Some(r)` when `m == r^k`.
pub fn exact_root(m: u64, k: u32) -> Option<u64> {
    if k == 1 || m <= 1 {
        return Some(m);
    }
    let guess = (m as f64).powf(1.0 / k as f64).round() as u64;
    let lo = guess.saturating_sub(1);
    (lo..=guess + 1).find(|&r| r.checked_pow(k) == Some(m))
}

/// Largest `e` with `p^e <= n`.
pub fn max_exponent(p: usize, n: usize) -> u32 {
    let mut e = 0;
    let mut q = 1usize;
    while let Some(next) = q.checked_mul(p) {
        if next > n {
            break;
        }
        q = next;
        e += 1;
    }
    e
}

/// Möbius function by trial division, used only by tests and small tables.
pub fn moebius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}
