use num_complex::Complex64;

use crate::algebra::torus::unit_root;

use super::function::BoundedFunction;

/// `f^(xi) = E_x f(x) e(-xi . x / p)` for every character `xi`, indexed like
/// the space. Uses the fast Walsh-Hadamard butterfly for `p = 2` and an
/// axis-by-axis DFT otherwise.
pub fn walsh_fourier(f: &BoundedFunction) -> Vec<Complex64> {
    let space = f.space();
    let (p, n) = (space.p() as usize, space.n());
    let mut data = f.values().to_vec();
    if p == 2 {
        let mut len = 1;
        while len < data.len() {
            for block in data.chunks_mut(2 * len) {
                let (a, b) = block.split_at_mut(len);
                for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                    let (u, v) = (*x, *y);
                    *x = u + v;
                    *y = u - v;
                }
            }
            len *= 2;
        }
    } else {
        let roots: Vec<Complex64> = (0..p).map(|r| unit_root(((p - r) % p) as u64, p as u64)).collect();
        let mut buf = vec![Complex64::new(0.0, 0.0); p];
        let mut stride = 1;
        for _ in 0..n {
            for base in 0..data.len() {
                if (base / stride) % p != 0 {
                    continue;
                }
                for (xi, b) in buf.iter_mut().enumerate() {
                    *b = (0..p).map(|x| data[base + x * stride] * roots[xi * x % p]).sum();
                }
                for (xi, b) in buf.iter().enumerate() {
                    data[base + xi * stride] = *b;
                }
            }
            stride *= p;
        }
    }
    let size = data.len() as f64;
    data.iter_mut().for_each(|v| *v /= size);
    data
}

/// `max |f^(xi)|` and the character attaining it first.
pub fn max_coefficient(f: &BoundedFunction) -> (usize, f64) {
    walsh_fourier(f)
        .iter()
        .enumerate()
        .map(|(i, c)| (i, c.norm()))
        .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best })
}
