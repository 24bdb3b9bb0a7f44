//! In-place radix-2 complex FFT for power-of-two lengths.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct FftPlan {
    len: usize,
    // twiddles[k] = exp(-2 pi i k / len), k < len / 2
    twiddles: Vec<Complex64>,
    bit_reverse: Vec<u32>,
}

impl FftPlan {
    /// Panics unless `len` is a power of two.
    pub fn new(len: usize) -> Self {
        assert!(len.is_power_of_two(), "FFT length {len} is not a power of two");
        let bits = len.trailing_zeros();
        let twiddles = (0..len / 2)
            .map(|k| {
                let angle = -2.0 * PI * k as f64 / len as f64;
                Complex64::new(libm::cos(angle), libm::sin(angle))
            })
            .collect();
        let bit_reverse = (0..len as u32)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (32 - bits) })
            .collect();
        Self {
            len,
            twiddles,
            bit_reverse,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `y_j = sum_k x_k exp(-2 pi i j k / len)`, unnormalized.
    pub fn forward(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.len);
        for (i, &j) in self.bit_reverse.iter().enumerate() {
            let j = j as usize;
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut half = 1;
        while half < self.len {
            let stride = self.len / (2 * half);
            for block in buf.chunks_exact_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let t = *b * self.twiddles[k * stride];
                    *b = *a - t;
                    *a += t;
                }
            }
            half *= 2;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|j| {
                x.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (k, &v)| {
                    let angle = -2.0 * PI * ((j * k) % n) as f64 / n as f64;
                    acc + v * Complex64::new(libm::cos(angle), libm::sin(angle))
                })
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        for len in [1usize, 2, 4, 8, 64, 256] {
            let x: Vec<Complex64> = (0..len)
                .map(|i| Complex64::new(libm::sin(i as f64 * 0.7) + 0.1 * i as f64, libm::cos(i as f64 * 1.3)))
                .collect();
            let mut y = x.clone();
            FftPlan::new(len).forward(&mut y);
            for (a, b) in y.iter().zip(naive_dft(&x)) {
                assert!((a - b).l1_norm() < 1e-9 * len as f64, "len {len}");
            }
        }
    }

    #[test]
    fn impulse_is_flat() {
        let mut buf = vec![Complex64::new(0.0, 0.0); 16];
        buf[0] = Complex64::new(1.0, 0.0);
        FftPlan::new(16).forward(&mut buf);
        assert!(buf.iter().all(|z| (z - Complex64::new(1.0, 0.0)).l1_norm() < 1e-15));
    }
}
