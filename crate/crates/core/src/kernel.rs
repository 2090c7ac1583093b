//! Kernel validation and the algebra behind window decoding.
//!
//! A kernel `K` of size `l = 2^t` is factored as `K = T · K_A` with `K_A` the
//! Arıkan kernel of the same size. With `v = u · T` the Arıkan input vector,
//! the relation between `u` and `v` is encoded in `θ' = (S | I)` and brought
//! into minimum-span form, from which the decoding windows follow.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{arikan_kernel, BitMatrix};

/// Kernel sizes above this are rejected; path bookkeeping packs bit vectors
/// into a single `u64`.
pub const MAX_KERNEL_SIZE: usize = 64;

/// Partial distances are brute-forced over cosets, so they stop here.
pub const MAX_PARTIAL_DISTANCE_SIZE: usize = 16;

/// An invertible `2^t x 2^t` binary kernel.
#[derive(Clone, PartialEq, Eq)]
pub struct Kernel {
    matrix: BitMatrix,
    t: u32,
    name: Option<String>,
}

impl Kernel {
    pub fn new(matrix: BitMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let l = matrix.rows();
        if l < 2 || !l.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(l));
        }
        if l > MAX_KERNEL_SIZE {
            return Err(Error::UnsupportedSize {
                size: l,
                max: MAX_KERNEL_SIZE,
            });
        }
        let rank = matrix.rank();
        if rank < l {
            return Err(Error::SingularMatrix { rank, dim: l });
        }
        Ok(Self {
            t: l.trailing_zeros(),
            matrix,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// `K_A = F_2^{⊗t}`.
    pub fn arikan(t: u32) -> Self {
        Self::new(arikan_kernel(t))
            .expect("Arikan kernel is invertible")
            .with_name(format!("arikan{}", 1usize << t))
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    #[inline]
    pub fn t(&self) -> u32 {
        self.t
    }

    #[inline]
    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Row `r` of the kernel packed into a word (bit `c` = column `c`).
    #[inline]
    pub fn row_mask(&self, r: usize) -> u64 {
        self.matrix.row_mask(r)
    }

    /// `u · K` for `u` packed into a word.
    pub fn encode_mask(&self, u: u64) -> u64 {
        let mut c = 0;
        let mut rest = u;
        while rest != 0 {
            let r = rest.trailing_zeros() as usize;
            c ^= self.row_mask(r);
            rest &= rest - 1;
        }
        c
    }
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("l", &self.size())
            .field("name", &self.name)
            .field("matrix", &self.matrix)
            .finish()
    }
}

/// A column permutation, stored 0-based. Output column `c` takes input column
/// `self[c]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty".into()));
        }
        let mut seen = vec![false; n];
        for &x in &order {
            if x >= n {
                return Err(Error::InvalidPermutation(format!(
                    "entry {x} out of range 0..{n}"
                )));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!("entry {x} repeated")));
            }
        }
        Ok(Self(order))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// The boundary converter: 1-based column numbers (as written in files and
    /// on the command line) to the internal 0-based form.
    pub fn from_one_based(order: &[usize]) -> Result<Self> {
        let zero_based = order
            .iter()
            .map(|&x| {
                x.checked_sub(1).ok_or_else(|| {
                    Error::InvalidPermutation("column numbers start at 1".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(zero_based)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|x| x + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (c, &x) in self.0.iter().enumerate() {
            inv[x] = c;
        }
        Self(inv)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }
}

/// Window-decoding data derived from a kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowProfile {
    l: usize,
    t: u32,
    /// Minimum-span form of `(S | I)`, `l x 2l`.
    pub theta: BitMatrix,
    /// End column of each row of `theta`.
    pub z: Vec<usize>,
    /// Arıkan phase at which kernel phase `i` is pinned: `j_i = z_{l-1-i} - l`.
    pub j: Vec<usize>,
    /// Running maximum of `j`.
    pub h: Vec<usize>,
    /// Decoding windows `D_i = {0..h_i} \ {j_0..j_i}`.
    pub windows: Vec<Vec<usize>>,
    /// Last nonzero position of each row of `T^{-1}`.
    pub tau: Vec<usize>,
    u_coeffs: Vec<u64>,
    v_coeffs: Vec<u64>,
}

impl WindowProfile {
    #[inline]
    pub fn size(&self) -> usize {
        self.l
    }

    #[inline]
    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn window_sizes(&self) -> Vec<usize> {
        self.windows.iter().map(Vec::len).collect()
    }

    pub fn max_window(&self) -> usize {
        self.windows.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `h_{i-1}` with `h_{-1} = -1`.
    #[inline]
    pub fn h_prev(&self, i: usize) -> isize {
        if i == 0 {
            -1
        } else {
            self.h[i - 1] as isize
        }
    }

    /// Coefficients of `u_0..u_{i-1}` in the expression for `u_i`, bit `s` = `u_s`.
    #[inline]
    pub fn u_coeffs(&self, i: usize) -> u64 {
        self.u_coeffs[i]
    }

    /// Coefficients of `v_0..v_{j_i}` in the expression for `u_i`, bit `t` = `v_t`.
    #[inline]
    pub fn v_coeffs(&self, i: usize) -> u64 {
        self.v_coeffs[i]
    }

    /// `u_i` implied by decided bits `u` and Arıkan inputs `v` (both packed,
    /// bit `s` = index `s`).
    #[inline]
    pub fn implied_u(&self, i: usize, u: u64, v: u64) -> u8 {
        (((self.u_coeffs[i] & u).count_ones() + (self.v_coeffs[i] & v).count_ones()) & 1) as u8
    }
}

/// True iff no column permutation of `k` is upper triangular.
///
/// Rows keep their order: an upper-triangular column permutation exists iff,
/// peeling from the last row upwards, every row has exactly one 1 among the
/// columns not yet removed (that column is then removed with the row).
pub fn is_polarizing(k: &Kernel) -> bool {
    let m = k.matrix();
    let l = k.size();
    let mut remaining = vec![true; l];
    for r in (0..l).rev() {
        let mut hits = (0..l).filter(|&c| remaining[c] && m.get(r, c));
        let (Some(c), None) = (hits.next(), hits.next()) else {
            return true;
        };
        remaining[c] = false;
    }
    false
}

/// `T` with `K = T · K_A`. `K_A` is an involution, so `T = K · K_A`.
pub fn decompose(k: &Kernel) -> BitMatrix {
    k.matrix()
        .multiply(&arikan_kernel(k.t()))
        .expect("square matrices of equal size")
}

/// `θ' = (S | I)` where `S` is `T` transposed with its columns reversed,
/// i.e. `S[r][c] = T[l-1-c][r]`.
pub fn theta_prime(t_mat: &BitMatrix) -> Result<BitMatrix> {
    if !t_mat.is_square() {
        return Err(Error::NotSquare {
            rows: t_mat.rows(),
            cols: t_mat.cols(),
        });
    }
    let l = t_mat.rows();
    Ok(BitMatrix::from_fn(l, 2 * l, |r, c| {
        if c < l {
            t_mat.get(l - 1 - c, r)
        } else {
            c - l == r
        }
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinSpanForm {
    pub theta: BitMatrix,
    pub starts: Vec<usize>,
    pub ends: Vec<usize>,
}

/// Row-reduces `(S | I)` with invertible `S` so that row `i` starts in
/// column `i` and all rows end in distinct columns.
///
/// Multiplying by `S^{-1}` makes the left block the identity; afterwards,
/// whenever rows `a < b` end in the same column, `row_a ^= row_b`. That keeps
/// the left block unit upper triangular (starts fixed) and strictly shortens
/// row `a`, so the loop terminates.
pub fn min_span_form(theta_prime: &BitMatrix) -> Result<MinSpanForm> {
    let l = theta_prime.rows();
    if theta_prime.cols() != 2 * l {
        return Err(Error::DimensionMismatch {
            left_rows: l,
            left_cols: theta_prime.cols(),
            right_rows: l,
            right_cols: 2 * l,
        });
    }
    let s = BitMatrix::from_fn(l, l, |r, c| theta_prime.get(r, c));
    let mut theta = s.invert()?.multiply(theta_prime)?;

    let end = |m: &BitMatrix, r: usize| m.row_end(r).expect("rows of an invertible system are nonzero");
    loop {
        let mut owner: Vec<Option<usize>> = vec![None; 2 * l];
        let mut clash = None;
        for r in 0..l {
            let e = end(&theta, r);
            if let Some(prev) = owner[e] {
                clash = Some((prev.min(r), prev.max(r)));
                break;
            }
            owner[e] = Some(r);
        }
        match clash {
            Some((a, b)) => theta.xor_row_into(b, a),
            None => break,
        }
    }

    let starts = (0..l)
        .map(|r| theta.row_start(r).expect("nonzero row"))
        .collect();
    let ends = (0..l).map(|r| end(&theta, r)).collect();
    Ok(MinSpanForm {
        theta,
        starts,
        ends,
    })
}

pub fn window_profile(k: &Kernel) -> WindowProfile {
    let l = k.size();
    let t_mat = decompose(k);
    let t_inv = t_mat.invert().expect("T is invertible when K is");
    let tau = (0..l)
        .map(|r| t_inv.row_end(r).expect("nonzero row"))
        .collect();

    let form = theta_prime(&t_mat)
        .and_then(|tp| min_span_form(&tp))
        .expect("theta' of an invertible T has an invertible left block");
    let theta = form.theta;
    let z = form.ends;

    let j: Vec<usize> = (0..l).map(|i| z[l - 1 - i] - l).collect();
    let h: Vec<usize> = j
        .iter()
        .scan(0usize, |acc, &x| {
            *acc = (*acc).max(x);
            Some(*acc)
        })
        .collect();
    let windows = (0..l)
        .map(|i| {
            (0..=h[i])
                .filter(|p| !j[..=i].contains(p))
                .collect::<Vec<_>>()
        })
        .collect();

    let mut u_coeffs = vec![0u64; l];
    let mut v_coeffs = vec![0u64; l];
    for i in 0..l {
        let row = l - 1 - i;
        for s in 0..i {
            if theta.get(row, l - 1 - s) {
                u_coeffs[i] |= 1 << s;
            }
        }
        for t in 0..=j[i] {
            if theta.get(row, l + t) {
                v_coeffs[i] |= 1 << t;
            }
        }
    }

    WindowProfile {
        l,
        t: k.t(),
        theta,
        z,
        j,
        h,
        windows,
        tau,
        u_coeffs,
        v_coeffs,
    }
}

/// Recovers `u_i` from `u_0..u_{i-1}` and `v_0..v_{j_i}`.
pub fn reconstruct_u(profile: &WindowProfile, u_prefix: &[u8], v_prefix: &[u8], i: usize) -> Result<u8> {
    if u_prefix.len() < i {
        return Err(Error::PrefixTooShort {
            needed: i,
            got: u_prefix.len(),
        });
    }
    let need_v = profile.j[i] + 1;
    if v_prefix.len() < need_v {
        return Err(Error::PrefixTooShort {
            needed: need_v,
            got: v_prefix.len(),
        });
    }
    let l = profile.size();
    let row = l - 1 - i;
    let from_u = (0..i).filter(|&s| u_prefix[s] & 1 == 1 && profile.theta.get(row, l - 1 - s));
    let from_v = (0..need_v).filter(|&t| v_prefix[t] & 1 == 1 && profile.theta.get(row, l + t));
    Ok(((from_u.count() + from_v.count()) & 1) as u8)
}

pub fn permute_columns(k: &Kernel, pi: &Permutation) -> Result<Kernel> {
    if pi.len() != k.size() {
        return Err(Error::InvalidPermutation(format!(
            "length {} does not match kernel size {}",
            pi.len(),
            k.size()
        )));
    }
    let mut out = Kernel::new(k.matrix().select_columns(pi.as_slice()))?;
    out.name = k.name.clone();
    Ok(out)
}

/// Minimum distance from each row to the span of the rows below it.
pub fn partial_distances(k: &Kernel) -> Result<Vec<usize>> {
    let l = k.size();
    if l > MAX_PARTIAL_DISTANCE_SIZE {
        return Err(Error::UnsupportedSize {
            size: l,
            max: MAX_PARTIAL_DISTANCE_SIZE,
        });
    }
    let rows = k.matrix().row_masks();
    Ok((0..l)
        .map(|i| {
            let below = &rows[i + 1..];
            // Gray-code walk over the span of `below`
            let mut coset = rows[i];
            let mut best = coset.count_ones();
            for step in 1u64..(1u64 << below.len()) {
                coset ^= below[step.trailing_zeros() as usize];
                best = best.min(coset.count_ones());
            }
            best as usize
        })
        .collect())
}

/// `(1/l) Σ log_l D_i` over the partial distances.
pub fn error_exponent(k: &Kernel) -> Result<f64> {
    let l = k.size() as f64;
    let d = partial_distances(k)?;
    Ok(d.iter().map(|&x| (x as f64).ln()).sum::<f64>() / (l * l.ln()))
}

/// Row weights in row order.
pub fn hamming_weight_multiset(m: &BitMatrix) -> Vec<usize> {
    m.row_weights()
}
