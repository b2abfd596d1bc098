//! Monomial bases for dense jets.
//!
//! Monomials in `nvars` real variables of total degree at most `max_degree`
//! are laid out in graded-lex order: ascending total degree, and within one
//! degree descending lexicographic order of the exponent vector (so `x1`
//! precedes `y1` precedes `x2`). Each degree occupies one contiguous block.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Largest dense lookup table (in entries) before falling back to hashing.
const DENSE_LOOKUP_LIMIT: u64 = 1 << 23;

/// Largest supported total degree; exponents are stored as `u8`.
pub const MAX_SUPPORTED_DEGREE: usize = 128;

#[derive(Debug)]
enum Lookup {
    Dense(Vec<u32>),
    Hashed(HashMap<u64, u32>),
}

#[derive(Debug)]
pub struct Basis {
    nvars: usize,
    max_degree: usize,
    exps: Vec<u8>,
    degree_start: Vec<usize>,
    codes: Vec<u64>,
    radix_pow: Vec<u64>,
    lookup: Lookup,
}

impl Basis {
    /// Shared basis for `(nvars, max_degree)`; built once per process.
    pub fn shared(nvars: usize, max_degree: usize) -> Arc<Basis> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Basis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("basis cache poisoned");
        guard
            .entry((nvars, max_degree))
            .or_insert_with(|| Arc::new(Basis::build(nvars, max_degree)))
            .clone()
    }

    fn build(nvars: usize, max_degree: usize) -> Basis {
        assert!(nvars >= 1, "basis needs at least one variable");
        assert!(
            max_degree <= MAX_SUPPORTED_DEGREE,
            "degree {max_degree} exceeds supported maximum"
        );
        let radix = (max_degree + 1) as u64;
        let mut radix_pow = Vec::with_capacity(nvars);
        let mut p = 1u64;
        for _ in 0..nvars {
            radix_pow.push(p);
            p = p.saturating_mul(radix);
        }
        let table_size = p;

        let mut exps = Vec::new();
        let mut degree_start = Vec::with_capacity(max_degree + 2);
        let mut scratch = vec![0u8; nvars];
        for d in 0..=max_degree {
            degree_start.push(exps.len() / nvars);
            push_compositions(d, 0, &mut scratch, &mut exps);
        }
        let count = exps.len() / nvars;
        degree_start.push(count);

        let codes: Vec<u64> = exps
            .chunks(nvars)
            .map(|e| e.iter().zip(&radix_pow).map(|(&k, &w)| k as u64 * w).sum())
            .collect();

        let lookup = if table_size <= DENSE_LOOKUP_LIMIT {
            let mut table = vec![u32::MAX; table_size as usize];
            for (i, &c) in codes.iter().enumerate() {
                table[c as usize] = i as u32;
            }
            Lookup::Dense(table)
        } else {
            Lookup::Hashed(codes.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect())
        };

        Basis {
            nvars,
            max_degree,
            exps,
            degree_start,
            codes,
            radix_pow,
            lookup,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Number of monomials of degree at most `max_degree`.
    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// Number of monomials of degree at most `d`.
    pub fn len_through(&self, d: usize) -> usize {
        self.degree_start[d.min(self.max_degree) + 1]
    }

    /// Index range of the degree-`d` block.
    pub fn block(&self, d: usize) -> std::ops::Range<usize> {
        self.degree_start[d]..self.degree_start[d + 1]
    }

    pub fn exponents(&self, idx: usize) -> &[u8] {
        &self.exps[idx * self.nvars..(idx + 1) * self.nvars]
    }

    pub fn degree_of(&self, idx: usize) -> usize {
        // degree_start is sorted; blocks are few
        self.degree_start.partition_point(|&s| s <= idx) - 1
    }

    pub(crate) fn code(&self, idx: usize) -> u64 {
        self.codes[idx]
    }

    pub(crate) fn unit_code(&self, var: usize) -> u64 {
        self.radix_pow[var]
    }

    /// Index of the monomial with the given radix code. The code must
    /// denote a monomial of this basis.
    #[inline]
    pub(crate) fn locate(&self, code: u64) -> usize {
        match &self.lookup {
            Lookup::Dense(t) => t[code as usize] as usize,
            Lookup::Hashed(m) => m[&code] as usize,
        }
    }

    pub fn index_of(&self, exps: &[u8]) -> Option<usize> {
        if exps.len() != self.nvars {
            return None;
        }
        let deg: usize = exps.iter().map(|&e| e as usize).sum();
        if deg > self.max_degree {
            return None;
        }
        let code: u64 = exps.iter().zip(&self.radix_pow).map(|(&k, &w)| k as u64 * w).sum();
        Some(self.locate(code))
    }
}

fn push_compositions(rem: usize, pos: usize, scratch: &mut [u8], out: &mut Vec<u8>) {
    let last = scratch.len() - 1;
    if pos == last {
        scratch[pos] = rem as u8;
        out.extend_from_slice(scratch);
        return;
    }
    for e in (0..=rem).rev() {
        scratch[pos] = e as u8;
        push_compositions(rem - e, pos + 1, scratch, out);
    }
}
