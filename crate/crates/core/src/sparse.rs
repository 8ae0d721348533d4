//! Compressed-sparse-row storage for real matrices.

use nalgebra::DMatrix;

use crate::C64;

/// Real matrix in CSR form with column indices sorted within each row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds a square matrix from `(row, col, value)` triplets.
    ///
    /// Duplicate positions are summed; explicit zeros are dropped.
    pub fn from_triplets(
        dim: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Self {
        let mut entries: Vec<(usize, usize, f64)> = triplets.into_iter().collect();
        entries.sort_unstable_by_key(|e| (e.0, e.1));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) outside {dim}x{dim}");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            row_ptr[r + 1] += 1;
            col_idx.push(c);
            values.push(v);
            last = Some((r, c));
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        let mut m = CsrMatrix {
            dim,
            row_ptr,
            col_idx,
            values,
        };
        m.prune_zeros();
        m
    }

    fn prune_zeros(&mut self) {
        if self.values.iter().all(|&v| v != 0.0) {
            return;
        }
        let mut row_ptr = vec![0usize; self.dim + 1];
        let mut col_idx = Vec::with_capacity(self.col_idx.len());
        let mut values = Vec::with_capacity(self.values.len());
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                if v != 0.0 {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr[r + 1] = col_idx.len();
        }
        self.row_ptr = row_ptr;
        self.col_idx = col_idx;
        self.values = values;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterates the stored `(col, value)` pairs of one row.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|r| self.get(r, r)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|r| self.row(r).map(|(_, v)| v).sum())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|r| self.row(r).all(|(c, v)| self.get(c, r) == v))
    }

    /// Returns `scale * self`.
    pub fn scaled(&self, scale: f64) -> Self {
        let mut m = self.clone();
        m.values.iter_mut().for_each(|v| *v *= scale);
        m.prune_zeros();
        m
    }

    /// Entrywise sum of two matrices of equal dimension.
    pub fn add(&self, other: &CsrMatrix) -> Self {
        assert_eq!(self.dim, other.dim);
        let triplets = (0..self.dim)
            .flat_map(|r| self.row(r).map(move |(c, v)| (r, c, v)))
            .chain((0..other.dim).flat_map(|r| other.row(r).map(move |(c, v)| (r, c, v))));
        CsrMatrix::from_triplets(self.dim, triplets.collect::<Vec<_>>())
    }

    /// Adds `diag[j]` to every diagonal entry.
    pub fn add_diagonal(&self, diag: &[f64]) -> Self {
        assert_eq!(self.dim, diag.len());
        let triplets = (0..self.dim)
            .flat_map(|r| self.row(r).map(move |(c, v)| (r, c, v)))
            .chain(diag.iter().enumerate().map(|(j, &d)| (j, j, d)));
        CsrMatrix::from_triplets(self.dim, triplets.collect::<Vec<_>>())
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                m[(r, c)] = v;
            }
        }
        m
    }

    /// `out += coeff * self * x`.
    pub fn mul_acc(&self, x: &[C64], coeff: C64, out: &mut [C64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        for (r, o) in out.iter_mut().enumerate() {
            let lo = self.row_ptr[r];
            let hi = self.row_ptr[r + 1];
            let mut acc = C64::new(0.0, 0.0);
            for k in lo..hi {
                acc += x[self.col_idx[k]] * self.values[k];
            }
            *o += coeff * acc;
        }
    }

    /// `out = coeff * (self - shift) x` and `acc += out`, in one pass.
    pub(crate) fn shifted_stage(
        &self,
        x: &[C64],
        coeff: C64,
        shift: f64,
        out: &mut [C64],
        acc: &mut [C64],
    ) {
        for r in 0..self.dim {
            let lo = self.row_ptr[r];
            let hi = self.row_ptr[r + 1];
            let mut dot = -x[r] * shift;
            for k in lo..hi {
                dot += x[self.col_idx[k]] * self.values[k];
            }
            let v = coeff * dot;
            out[r] = v;
            acc[r] += v;
        }
    }

    /// Gershgorin interval `[lo, hi]` containing every eigenvalue of a symmetric matrix.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for r in 0..self.dim {
            let mut center = 0.0;
            let mut radius = 0.0;
            for (c, v) in self.row(r) {
                if c == r {
                    center = v;
                } else {
                    radius += v.abs();
                }
            }
            lo = lo.min(center - radius);
            hi = hi.max(center + radius);
        }
        if self.dim == 0 {
            (0.0, 0.0)
        } else {
            (lo, hi)
        }
    }

    /// Maximum absolute row sum, an upper bound on the spectral norm of a symmetric matrix.
    pub fn max_row_abs_sum(&self) -> f64 {
        (0..self.dim)
            .map(|r| self.row(r).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Symmetric tridiagonal matrix, `diag[r]` on the diagonal and `off[r]` at `(r, r + 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    /// Extracts the bands of a symmetric CSR matrix, or `None` if any entry lies off the band.
    pub fn from_csr(m: &CsrMatrix) -> Option<Self> {
        let n = m.dim();
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        for r in 0..n {
            for (c, v) in m.row(r) {
                match c as isize - r as isize {
                    0 => diag[r] = v,
                    1 => off[r] = v,
                    -1 if m.get(c, r) == v => {}
                    _ => return None,
                }
            }
        }
        Some(Tridiagonal { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// One fourth-order Taylor step `y <- sum_k (-i dt (M - shift))^k / k! y`.
    ///
    /// The four stages are interleaved in a single sweep with a lag of one row
    /// per stage, so intermediate vectors live in four-slot rings.
    /// Fixed-shift Taylor stepper over a zero-padded copy of the state.
    pub(crate) fn stepper(&self, shift: f64) -> BandStepper {
        let n = self.dim();
        let len = n + 2 * HALO;
        let mut dsh = vec![0.0; len];
        for (d, &v) in dsh[HALO..HALO + n].iter_mut().zip(&self.diag) {
            *d = v - shift;
        }
        // couple[p] joins padded rows p - 1 and p.
        let mut couple = vec![0.0; len + 1];
        for (r, &v) in self.off.iter().enumerate() {
            couple[HALO + r + 1] = v;
        }
        let plane = |extra: usize| Planes {
            re: vec![0.0; BLOCK + extra],
            im: vec![0.0; BLOCK + extra],
        };
        BandStepper {
            n,
            dsh,
            couple,
            y: Planes {
                re: vec![0.0; len],
                im: vec![0.0; len],
            },
            next: Planes {
                re: vec![0.0; len],
                im: vec![0.0; len],
            },
            bufs: [plane(6), plane(4), plane(2)],
        }
    }
}

const HALO: usize = 4;
const BLOCK: usize = 256;

#[derive(Clone, Debug)]
struct Planes {
    re: Vec<f64>,
    im: Vec<f64>,
}

/// Fourth-order Taylor propagation for a tridiagonal operator.
///
/// The state is held as separate real and imaginary planes. Rows are
/// processed in cache-sized blocks; each block recomputes a shrinking halo
/// so all four stages finish before moving on.
#[derive(Clone, Debug)]
pub(crate) struct BandStepper {
    n: usize,
    dsh: Vec<f64>,
    couple: Vec<f64>,
    y: Planes,
    next: Planes,
    bufs: [Planes; 3],
}

impl BandStepper {
    pub(crate) fn load(&mut self, psi: &[C64]) {
        for ((re, im), z) in self.y.re[HALO..]
            .iter_mut()
            .zip(&mut self.y.im[HALO..])
            .zip(psi)
        {
            *re = z.re;
            *im = z.im;
        }
    }

    /// Writes the current state, multiplied by `phase`, into `out`.
    pub(crate) fn store(&self, phase: C64, out: &mut [C64]) {
        let (re, im) = (
            &self.y.re[HALO..HALO + self.n],
            &self.y.im[HALO..HALO + self.n],
        );
        for ((o, &a), &b) in out.iter_mut().zip(re).zip(im) {
            *o = C64::new(a, b) * phase;
        }
    }

    pub(crate) fn norm(&self) -> f64 {
        let sq = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
        (sq(&self.y.re) + sq(&self.y.im)).sqrt()
    }

    /// `y <- sum_{k<=4} (-i dt (M - shift))^k / k! y`.
    pub(crate) fn step(&mut self, dt: f64) {
        #[cfg(target_arch = "x86_64")]
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the required CPU feature was detected at runtime.
            unsafe { self.step_avx2(dt) };
            return;
        }
        self.step_portable(dt);
    }

    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx2")]
    unsafe fn step_avx2(&mut self, dt: f64) {
        self.step_portable(dt);
    }

    #[inline(always)]
    fn step_portable(&mut self, dt: f64) {
        let end = HALO + self.n;
        let mut a = HALO;
        while a < end {
            let b = (a + BLOCK).min(end);
            let m = b - a;
            let [v1, v2, v3] = &mut self.bufs;
            let (dsh, cp) = (&self.dsh, &self.couple);
            band_stage(&self.y, a - 4, m + 6, &dsh[a - 3..], &cp[a - 3..], dt, v1);
            band_stage(v1, 0, m + 4, &dsh[a - 2..], &cp[a - 2..], dt / 2.0, v2);
            band_stage(v2, 0, m + 2, &dsh[a - 1..], &cp[a - 1..], dt / 3.0, v3);
            last_stage(
                &self.y,
                a,
                m,
                [v1, v2, v3],
                &dsh[a..],
                &cp[a..],
                dt / 4.0,
                &mut self.next,
            );
            a = b;
        }
        std::mem::swap(&mut self.y, &mut self.next);
    }
}

/// `out[i] = -i s (couple[i] u[i] + dsh[i] u[i + 1] + couple[i + 1] u[i + 2])`
/// for `i < m`, reading `u` from `start`.
#[inline(always)]
fn band_stage(
    u: &Planes,
    start: usize,
    m: usize,
    dsh: &[f64],
    couple: &[f64],
    s: f64,
    out: &mut Planes,
) {
    let (d, c0, c1) = (&dsh[..m], &couple[..m], &couple[1..m + 1]);
    let (ur, ui) = (&u.re[start..start + m + 2], &u.im[start..start + m + 2]);
    let (or, oi) = (&mut out.re[..m], &mut out.im[..m]);
    for i in 0..m {
        let re = c0[i] * ur[i] + d[i] * ur[i + 1] + c1[i] * ur[i + 2];
        let im = c0[i] * ui[i] + d[i] * ui[i + 1] + c1[i] * ui[i + 2];
        or[i] = s * im;
        oi[i] = -s * re;
    }
}

/// Fourth stage fused with the Taylor sum: rows `[a, a + m)` of `next`.
#[inline(always)]
#[allow(clippy::too_many_arguments)]
fn last_stage(
    y: &Planes,
    a: usize,
    m: usize,
    v: [&Planes; 3],
    dsh: &[f64],
    couple: &[f64],
    s: f64,
    next: &mut Planes,
) {
    let (d, c0, c1) = (&dsh[..m], &couple[..m], &couple[1..m + 1]);
    let [v1, v2, v3] = v;
    let (ur, ui) = (&v3.re[..m + 2], &v3.im[..m + 2]);
    let (yr, yi) = (&y.re[a..a + m], &y.im[a..a + m]);
    let (p1r, p1i, p2r, p2i) = (
        &v1.re[3..3 + m],
        &v1.im[3..3 + m],
        &v2.re[2..2 + m],
        &v2.im[2..2 + m],
    );
    let (nr, ni) = (&mut next.re[a..a + m], &mut next.im[a..a + m]);
    for i in 0..m {
        let re = c0[i] * ur[i] + d[i] * ur[i + 1] + c1[i] * ur[i + 2];
        let im = c0[i] * ui[i] + d[i] * ui[i + 1] + c1[i] * ui[i + 2];
        nr[i] = yr[i] + p1r[i] + p2r[i] + ur[i + 1] + s * im;
        ni[i] = yi[i] + p1i[i] + p2i[i] + ui[i + 1] - s * re;
    }
}
