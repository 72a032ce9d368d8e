use std::sync::{OnceLock, RwLock};

use rug::Integer;

/// Exact factorial cache. Grows monotonically up to the largest argument
/// requested; readers share the lock, growth takes it exclusively.
#[derive(Debug)]
pub struct BigCombinatorics {
    factorials: RwLock<Vec<Integer>>,
}

impl Default for BigCombinatorics {
    fn default() -> Self {
        Self::new()
    }
}

impl BigCombinatorics {
    pub fn new() -> Self {
        BigCombinatorics { factorials: RwLock::new(vec![Integer::from(1)]) }
    }

    pub fn global() -> &'static BigCombinatorics {
        static CACHE: OnceLock<BigCombinatorics> = OnceLock::new();
        CACHE.get_or_init(BigCombinatorics::new)
    }

    pub fn cached_len(&self) -> usize {
        self.factorials.read().expect("factorial cache poisoned").len()
    }

    pub fn factorial(&self, m: usize) -> Integer {
        {
            let table = self.factorials.read().expect("factorial cache poisoned");
            if let Some(v) = table.get(m) {
                return v.clone();
            }
        }
        let mut table = self.factorials.write().expect("factorial cache poisoned");
        while table.len() <= m {
            let k = table.len();
            let next = Integer::from(&table[k - 1] * k as u64);
            table.push(next);
        }
        table[m].clone()
    }

    /// `C(n, k)` from cached factorials; zero outside `0 <= k <= n`.
    pub fn binomial(&self, n: u64, k: i64) -> Integer {
        if k < 0 || k as u64 > n {
            return Integer::new();
        }
        let k = k as usize;
        let n = n as usize;
        let num = self.factorial(n);
        let den = self.factorial(k) * self.factorial(n - k);
        num.div_exact(&den)
    }
}

/// `C(n, k)` as an exact integer, zero when `k < 0` or `k > n`.
pub fn big_binomial(n: u64, k: i64) -> Integer {
    if k < 0 || k as u64 > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

/// `[C(2n, n), C(2n, n+1), ..., C(2n, 2n)]`, each entry obtained from the
/// previous one by the exact step `C(2n, n+r+1) = C(2n, n+r) (n-r) / (n+r+1)`.
pub fn central_binomial_row(n: u64) -> Vec<Integer> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = Integer::from(Integer::binomial_u(2 * n as u32, n as u32));
    row.push(c.clone());
    for r in 0..n {
        c *= n - r;
        c = c.div_exact_u((n + r + 1) as u32);
        row.push(c.clone());
    }
    row
}
