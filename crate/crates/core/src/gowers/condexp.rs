use std::collections::HashMap;

use num_complex::Complex64;
use num_rational::Ratio;

/// Level-set partition generated by finitely many functions: two points lie
/// in the same atom iff every factor takes the same value on them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atoms {
    /// Atom id of every point; ids follow first occurrence.
    pub labels: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl Atoms {
    pub fn new(size: usize, factors: &[Vec<u64>]) -> Self {
        let mut ids: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut labels = Vec::with_capacity(size);
        let mut sizes = Vec::new();
        for x in 0..size {
            let key: Vec<u64> = factors.iter().map(|f| f[x]).collect();
            let next = ids.len();
            let id = *ids.entry(key).or_insert(next);
            if id == sizes.len() {
                sizes.push(0);
            }
            sizes[id] += 1;
            labels.push(id);
        }
        Self { labels, sizes }
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Whether a function is constant on every atom.
    pub fn measures<T: PartialEq>(&self, g: &[T]) -> bool {
        let mut rep: Vec<Option<&T>> = vec![None; self.count()];
        g.iter().zip(&self.labels).all(|(v, &a)| match rep[a] {
            Some(r) => r == v,
            None => {
                rep[a] = Some(v);
                true
            }
        })
    }
}

/// `E(f | B)` and its energy `||E(f | B)||_2^2`.
pub fn conditional_expectation(f: &[Complex64], factors: &[Vec<u64>]) -> (Vec<Complex64>, f64) {
    let atoms = Atoms::new(f.len(), factors);
    let mut sums = vec![Complex64::new(0.0, 0.0); atoms.count()];
    for (v, &a) in f.iter().zip(&atoms.labels) {
        sums[a] += v;
    }
    let means: Vec<Complex64> = sums.iter().zip(&atoms.sizes).map(|(s, &c)| s / c as f64).collect();
    let out: Vec<Complex64> = atoms.labels.iter().map(|&a| means[a]).collect();
    let energy = out.iter().map(|v| v.norm_sqr()).sum::<f64>() / f.len() as f64;
    (out, energy)
}

/// Exact version for rational-valued `f`.
pub fn conditional_expectation_exact(f: &[Ratio<i128>], factors: &[Vec<u64>]) -> (Vec<Ratio<i128>>, Ratio<i128>) {
    let atoms = Atoms::new(f.len(), factors);
    let mut sums = vec![Ratio::from_integer(0); atoms.count()];
    for (v, &a) in f.iter().zip(&atoms.labels) {
        sums[a] += v;
    }
    let means: Vec<Ratio<i128>> = sums
        .iter()
        .zip(&atoms.sizes)
        .map(|(s, &c)| s / Ratio::from_integer(c as i128))
        .collect();
    let out: Vec<Ratio<i128>> = atoms.labels.iter().map(|&a| means[a]).collect();
    let energy = inner_product_exact(&out, &out);
    (out, energy)
}

/// `E_x f(x) g(x)` for real rational functions.
pub fn inner_product_exact(f: &[Ratio<i128>], g: &[Ratio<i128>]) -> Ratio<i128> {
    let s: Ratio<i128> = f.iter().zip(g).map(|(a, b)| a * b).sum();
    s / Ratio::from_integer(f.len() as i128)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_factors_gives_the_mean() {
        let f: Vec<Complex64> = (0..8).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let (e, energy) = conditional_expectation(&f, &[]);
        assert!(e.iter().all(|v| (v - Complex64::new(3.5, 1.0)).norm() < 1e-12));
        assert!((energy - (3.5f64 * 3.5 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn measurable_functions_are_fixed() {
        let labels: Vec<u64> = (0..12).map(|x| x % 3).collect();
        let f: Vec<Ratio<i128>> = labels.iter().map(|&l| Ratio::new(l as i128, 7)).collect();
        let (e, _) = conditional_expectation_exact(&f, std::slice::from_ref(&labels));
        assert_eq!(e, f);
        let atoms = Atoms::new(12, &[labels]);
        assert_eq!(atoms.count(), 3);
        assert!(atoms.measures(&f));
    }

    #[test]
    fn pythagoras_and_orthogonality() {
        let f: Vec<Ratio<i128>> = (0..16).map(|x| Ratio::new((x * x % 7) as i128 - 3, 5)).collect();
        let factor: Vec<u64> = (0..16).map(|x| (x % 4 == 0) as u64).collect();
        let (e, energy) = conditional_expectation_exact(&f, std::slice::from_ref(&factor));
        let resid: Vec<Ratio<i128>> = f.iter().zip(&e).map(|(a, b)| a - b).collect();
        assert_eq!(inner_product_exact(&f, &f), energy + inner_product_exact(&resid, &resid));
        let g: Vec<Ratio<i128>> = factor.iter().map(|&v| Ratio::from_integer(3 * v as i128 - 1)).collect();
        assert_eq!(inner_product_exact(&resid, &g), Ratio::from_integer(0));
    }
}
