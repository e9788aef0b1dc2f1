use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::field::PrimeField;
use crate::error::{Error, Result};

/// Default cap on `p^n` for exhaustive enumeration.
pub const DEFAULT_SPACE_CAP: u128 = 1 << 24;

/// A vector of `F_p^n`, stored as its mixed-radix index
/// `sum_t digit_t * p^t` (digit 1 least significant). For `p = 2` the index
/// is exactly the packed bit vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FVec {
    p: u32,
    n: u32,
    index: u64,
}

/// JSON form `{"p": int, "digits": [int]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVecJson {
    pub p: u32,
    pub digits: Vec<u32>,
}

impl FVec {
    pub fn from_digits(p: u32, digits: &[u32]) -> Result<Self> {
        let mut index = 0u64;
        for &d in digits.iter().rev() {
            if d >= p {
                return Err(Error::DigitOutOfRange { digit: d, p });
            }
            index = index * p as u64 + d as u64;
        }
        Ok(Self {
            p,
            n: digits.len() as u32,
            index,
        })
    }

    #[inline]
    pub fn from_index(p: u32, n: u32, index: u64) -> Self {
        Self { p, n, index }
    }

    pub fn zero(p: u32, n: u32) -> Self {
        Self { p, n, index: 0 }
    }

    /// The standard basis vector `e_i` (0-based `i`).
    pub fn basis(p: u32, n: u32, i: u32) -> Self {
        Self {
            p,
            n,
            index: (p as u64).pow(i),
        }
    }

    #[inline]
    pub fn index(&self) -> usize {
        self.index as usize
    }
    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn digits(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n as usize);
        let mut x = self.index;
        for _ in 0..self.n {
            out.push((x % self.p as u64) as u32);
            x /= self.p as u64;
        }
        out
    }

    pub fn digit(&self, t: usize) -> u32 {
        ((self.index / (self.p as u64).pow(t as u32)) % self.p as u64) as u32
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((self.p, self.n), (other.p, other.n));
        Self {
            index: add_indices(self.p, self.n as usize, self.index as usize, other.index as usize)
                as u64,
            ..*self
        }
    }

    pub fn scale(&self, c: u32) -> Self {
        let digits: Vec<u32> = self.digits().iter().map(|d| (d * c) % self.p).collect();
        Self::from_digits(self.p, &digits).expect("digits reduced")
    }

    pub fn to_json(&self) -> FVecJson {
        FVecJson {
            p: self.p,
            digits: self.digits(),
        }
    }

    pub fn from_json(j: &FVecJson) -> Result<Self> {
        PrimeField::new(j.p)?;
        Self::from_digits(j.p, &j.digits)
    }
}

/// Digitwise sum of two packed vectors.
#[inline]
pub fn add_indices(p: u32, n: usize, a: usize, b: usize) -> usize {
    if p == 2 {
        return a ^ b;
    }
    let p = p as usize;
    let (mut a, mut b) = (a, b);
    let mut out = 0usize;
    let mut place = 1usize;
    for _ in 0..n {
        let d = (a % p + b % p) % p;
        out += d * place;
        place *= p;
        a /= p;
        b /= p;
    }
    out
}

/// Digitwise negation of a packed vector.
#[inline]
pub fn neg_index(p: u32, n: usize, a: usize) -> usize {
    if p == 2 {
        return a;
    }
    let p = p as usize;
    let mut a = a;
    let mut out = 0usize;
    let mut place = 1usize;
    for _ in 0..n {
        out += ((p - a % p) % p) * place;
        place *= p;
        a /= p;
    }
    out
}

/// The vector space `F_p^n` as an enumerable index set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Space {
    field: PrimeField,
    n: usize,
    size: usize,
}

impl Space {
    pub fn new(p: u32, n: usize) -> Result<Self> {
        Self::with_cap(p, n, DEFAULT_SPACE_CAP)
    }

    pub fn with_cap(p: u32, n: usize, cap: u128) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let size = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if size > cap {
            return Err(Error::CapExceeded { size, cap });
        }
        Ok(Self {
            field,
            n,
            size: size as usize,
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.field.p()
    }
    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        add_indices(self.p(), self.n, a, b)
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        neg_index(self.p(), self.n, a)
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Index of `e_i` (0-based).
    #[inline]
    pub fn basis(&self, i: usize) -> usize {
        (self.p() as usize).pow(i as u32)
    }

    pub fn vector(&self, index: usize) -> FVec {
        FVec::from_index(self.p(), self.n as u32, index as u64)
    }

    /// Digit `t` of the vector with the given index.
    #[inline]
    pub fn digit(&self, index: usize, t: usize) -> u32 {
        ((index / (self.p() as usize).pow(t as u32)) % self.p() as usize) as u32
    }

    pub fn digits(&self, index: usize) -> Vec<u32> {
        self.vector(index).digits()
    }

    /// Digit sum `|x_1| + ... + |x_n|` as an integer.
    pub fn digit_sum(&self, index: usize) -> u32 {
        let p = self.p() as usize;
        let mut x = index;
        let mut s = 0;
        while x > 0 {
            s += (x % p) as u32;
            x /= p;
        }
        s
    }

    /// Every vector once, in lexicographic digit order (digit 1 fastest).
    pub fn enumerate(&self) -> impl Iterator<Item = FVec> + '_ {
        (0..self.size).map(move |i| self.vector(i))
    }

    /// Splits the index range into `workers` contiguous chunks.
    pub fn chunks(&self, workers: usize) -> Vec<Range<usize>> {
        chunk_ranges(self.size, workers)
    }

    /// Table of `x + h` for every `x`.
    pub fn translation(&self, h: usize) -> Vec<usize> {
        if self.p() == 2 {
            return (0..self.size).map(|x| x ^ h).collect();
        }
        // carry-free digitwise addition over the lexicographic order
        (0..self.size).map(|x| self.add(x, h)).collect()
    }

    /// Dot product `sum_t a_t b_t` in F_p.
    pub fn dot(&self, a: usize, b: usize) -> u32 {
        let p = self.p() as usize;
        if p == 2 {
            return (a & b).count_ones() & 1 ;
        }
        let (mut a, mut b) = (a, b);
        let mut s = 0usize;
        for _ in 0..self.n {
            s += (a % p) * (b % p);
            a /= p;
            b /= p;
        }
        (s % p) as u32
    }
}

/// Contiguous split of `0..len` into at most `workers` nonempty ranges.
pub fn chunk_ranges(len: usize, workers: usize) -> Vec<Range<usize>> {
    let w = workers.max(1).min(len.max(1));
    let base = len / w;
    let extra = len % w;
    let mut out = Vec::with_capacity(w);
    let mut start = 0;
    for i in 0..w {
        let l = base + usize::from(i < extra);
        out.push(start..start + l);
        start += l;
    }
    out
}

/// Steps of a reflected p-ary Gray code over `F_p^n`: each entry is
/// `(coordinate, delta)` with `delta = +1` or `p - 1` (i.e. -1), taking the
/// zero vector through every vector exactly once.
pub fn gray_steps(p: u32, n: usize) -> Vec<(usize, u32)> {
    let mut steps = Vec::new();
    let mut digits = vec![0u32; n];
    let mut dirs = vec![1i32; n];
    let total = (p as usize).pow(n as u32);
    for _ in 1..total {
        // lowest coordinate that can still move in its current direction
        let mut t = 0;
        loop {
            let next = digits[t] as i32 + dirs[t];
            if (0..p as i32).contains(&next) {
                digits[t] = next as u32;
                steps.push((t, if dirs[t] == 1 { 1 } else { p - 1 }));
                break;
            }
            dirs[t] = -dirs[t];
            t += 1;
        }
    }
    steps
}
