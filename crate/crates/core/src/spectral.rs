//! Trigonometric interpolation of periodic samples on `[0, 2pi)`.
//!
//! Samples are taken at `t_j = 2 pi j / N` with `N` even. The interpolant keeps the
//! Nyquist mode as a pure cosine so that it passes through every sample.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use std::f64::consts::TAU;

/// Multi-channel trigonometric interpolant.
#[derive(Debug, Clone)]
pub struct Trig {
    n: usize,
    /// `spectrum[ch][k]`, unnormalized forward DFT.
    spectrum: Vec<Vec<Complex64>>,
}

impl Trig {
    /// Build from `channels[ch][j]`; all channels must have the same even length.
    pub fn new(channels: &[Vec<f64>]) -> Self {
        let n = channels[0].len();
        assert!(n >= 2 && n.is_multiple_of(2), "sample count must be even");
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        let spectrum = channels
            .iter()
            .map(|ch| {
                assert_eq!(ch.len(), n);
                let mut buf: Vec<Complex64> = ch.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                fft.process(&mut buf);
                buf
            })
            .collect();
        Trig { n, spectrum }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.spectrum.len()
    }

    /// Signed wavenumber of DFT slot `k`.
    fn wavenumber(&self, k: usize) -> i64 {
        if k <= self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        }
    }

    /// Zero every coefficient below `rel` times the largest one over all channels.
    pub fn chop(&mut self, rel: f64) {
        let max = self.spectrum.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
        for x in self.spectrum.iter_mut().flatten() {
            if x.norm() < rel * max {
                *x = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Fraction of non-mean spectral energy in the top quartile of wavenumbers.
    pub fn tail_ratio(&self) -> f64 {
        let cut = (3 * self.n / 8) as i64;
        let (mut tail, mut total) = (0.0, 0.0);
        for ch in &self.spectrum {
            for (k, x) in ch.iter().enumerate().skip(1) {
                let e = x.norm_sqr();
                total += e;
                if self.wavenumber(k).abs() >= cut {
                    tail += e;
                }
            }
        }
        if total == 0.0 {
            0.0
        } else {
            tail / total
        }
    }

    /// Values of the `order`-th derivative at `m` uniform points (`m >= n`, `m` even).
    pub fn resample(&self, order: u32, m: usize) -> Vec<Vec<f64>> {
        assert!(m >= self.n && m.is_multiple_of(2));
        let mut planner = FftPlanner::new();
        let ifft = planner.plan_fft_inverse(m);
        let half = self.n / 2;
        self.spectrum
            .iter()
            .map(|ch| {
                let mut buf = vec![Complex64::new(0.0, 0.0); m];
                for (k, x) in ch.iter().enumerate() {
                    let w = self.wavenumber(k);
                    if w.unsigned_abs() as usize == half {
                        continue;
                    }
                    let slot = if w >= 0 { w as usize } else { (m as i64 + w) as usize };
                    buf[slot] = x * ik_pow(w as f64, order);
                }
                // Nyquist cosine: A cos(h t) differentiated and evaluated on the finer grid
                let nyq = ch[half].re;
                if nyq != 0.0 {
                    let h = half as f64;
                    if m == self.n {
                        buf[half] += Complex64::new(nyq * ik_pow(h, order).re, 0.0);
                    } else {
                        let z = 0.5 * nyq;
                        buf[half] += Complex64::new(z, 0.0) * ik_pow(h, order);
                        buf[m - half] += Complex64::new(z, 0.0) * ik_pow(-h, order);
                    }
                }
                ifft.process(&mut buf);
                let scale = 1.0 / self.n as f64;
                buf.iter().map(|z| z.re * scale).collect()
            })
            .collect()
    }

    /// Derivative of the given order on the original sample grid.
    pub fn grid_derivative(&self, order: u32) -> Vec<Vec<f64>> {
        self.resample(order, self.n)
    }

    /// Derivatives `0..=max_order` at an arbitrary parameter: `out[order][ch]`.
    pub fn eval(&self, t: f64, max_order: usize) -> Vec<Vec<f64>> {
        let dim = self.dim();
        let mut out = vec![vec![0.0; dim]; max_order + 1];
        let n = self.n as f64;
        let half = self.n / 2;
        for (ch, spec) in self.spectrum.iter().enumerate() {
            out[0][ch] += spec[0].re / n;
        }
        for k in 1..=half {
            let kf = k as f64;
            let (s, c) = (kf * t).sin_cos();
            for (ch, spec) in self.spectrum.iter().enumerate() {
                // a cos kt + b sin kt
                let (a, b) = if k == half {
                    (spec[k].re / n, 0.0)
                } else {
                    (2.0 * spec[k].re / n, -2.0 * spec[k].im / n)
                };
                let mut kp = 1.0;
                for (order, row) in out.iter_mut().enumerate() {
                    // d^m/dt^m of cos(kt) = k^m cos(kt + m pi/2)
                    let (cm, sm) = match order % 4 {
                        0 => (c, s),
                        1 => (-s, c),
                        2 => (-c, -s),
                        _ => (s, -c),
                    };
                    row[ch] += kp * (a * cm + b * sm);
                    kp *= kf;
                }
            }
        }
        out
    }

    /// Antiderivative of the non-mean part of channel 0 at `t`, with zero mean.
    pub fn antiderivative_at(&self, t: f64) -> f64 {
        let n = self.n as f64;
        let half = self.n / 2;
        let spec = &self.spectrum[0];
        let mut sum = 0.0;
        for k in 1..=half {
            let kf = k as f64;
            let (s, c) = (kf * t).sin_cos();
            let (a, b) = if k == half {
                (spec[k].re / n, 0.0)
            } else {
                (2.0 * spec[k].re / n, -2.0 * spec[k].im / n)
            };
            // integral of a cos kt + b sin kt
            sum += (a * s - b * c) / kf;
        }
        sum
    }
}

fn ik_pow(k: f64, order: u32) -> Complex64 {
    Complex64::new(0.0, k).powu(order)
}

/// Uniform parameter grid with `n` points on `[0, 2pi)`.
pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}
