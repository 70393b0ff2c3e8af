//! Sparse multilinear maps given by structure constants.
//!
//! A [`Tensor`] of arity k maps k basis indices to a sparse list of
//! `(output index, coefficient)` pairs. Input index tuples are flattened row-major
//! into a dense offset table, so lookups are O(1).

use crate::field::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    field: Field,
    in_dims: Vec<usize>,
    out_dim: usize,
    offsets: Vec<u32>,
    outs: Vec<u32>,
    coeffs: Vec<Scalar>,
}

impl Tensor {
    /// Builds a tensor from `(inputs, output, coefficient)` entries. Repeated keys
    /// are summed; zero coefficients are dropped.
    pub fn from_entries<I>(field: Field, in_dims: &[usize], out_dim: usize, entries: I) -> Tensor
    where
        I: IntoIterator<Item = (Vec<usize>, usize, Scalar)>,
    {
        let slots: usize = in_dims.iter().product();
        let mut buckets: Vec<Vec<(u32, Scalar)>> = vec![Vec::new(); slots];
        for (idx, out, c) in entries {
            assert_eq!(idx.len(), in_dims.len(), "entry arity mismatch");
            assert!(out < out_dim, "output index {out} out of range");
            let key = flat_index(in_dims, &idx);
            if c % field.p() != 0 {
                buckets[key].push((out as u32, c % field.p()));
            }
        }
        Tensor::from_buckets(field, in_dims, out_dim, buckets)
    }

    /// Builds a tensor by evaluating `f` on every basis tuple; `f` returns a dense
    /// output vector.
    pub fn from_fn<F>(field: Field, in_dims: &[usize], out_dim: usize, mut f: F) -> Tensor
    where
        F: FnMut(&[usize]) -> Vec<Scalar>,
    {
        let slots: usize = in_dims.iter().product();
        let mut buckets = Vec::with_capacity(slots);
        let mut idx = vec![0usize; in_dims.len()];
        for _ in 0..slots {
            let v = f(&idx);
            assert_eq!(v.len(), out_dim, "tensor function returned wrong length");
            buckets.push(v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k as u32, c)).collect());
            advance(&mut idx, in_dims);
        }
        Tensor::from_buckets(field, in_dims, out_dim, buckets)
    }

    fn from_buckets(field: Field, in_dims: &[usize], out_dim: usize, buckets: Vec<Vec<(u32, Scalar)>>) -> Tensor {
        let mut offsets = Vec::with_capacity(buckets.len() + 1);
        let mut outs = Vec::new();
        let mut coeffs = Vec::new();
        offsets.push(0u32);
        for mut b in buckets {
            b.sort_by_key(|e| e.0);
            let mut merged: Vec<(u32, Scalar)> = Vec::with_capacity(b.len());
            for (k, c) in b {
                match merged.last_mut() {
                    Some(last) if last.0 == k => last.1 = field.add(last.1, c),
                    _ => merged.push((k, c)),
                }
            }
            for (k, c) in merged.into_iter().filter(|e| e.1 != 0) {
                outs.push(k);
                coeffs.push(c);
            }
            offsets.push(outs.len() as u32);
        }
        Tensor { field, in_dims: in_dims.to_vec(), out_dim, offsets, outs, coeffs }
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn arity(&self) -> usize {
        self.in_dims.len()
    }
    pub fn in_dims(&self) -> &[usize] {
        &self.in_dims
    }
    pub fn out_dim(&self) -> usize {
        self.out_dim
    }
    pub fn nnz(&self) -> usize {
        self.outs.len()
    }

    /// Sparse value on a basis tuple.
    #[inline]
    pub fn at(&self, idx: &[usize]) -> (&[u32], &[Scalar]) {
        let key = flat_index(&self.in_dims, idx);
        let (a, b) = (self.offsets[key] as usize, self.offsets[key + 1] as usize);
        (&self.outs[a..b], &self.coeffs[a..b])
    }

    /// Dense value on a basis tuple.
    pub fn at_dense(&self, idx: &[usize]) -> Vec<Scalar> {
        let mut v = vec![0; self.out_dim];
        let (o, c) = self.at(idx);
        for (&k, &x) in o.iter().zip(c) {
            v[k as usize] = x;
        }
        v
    }

    /// `acc += scale * T(e_idx)`.
    #[inline]
    pub fn accumulate(&self, acc: &mut [Scalar], idx: &[usize], scale: Scalar) {
        let f = self.field;
        let (o, c) = self.at(idx);
        for (&k, &x) in o.iter().zip(c) {
            let k = k as usize;
            acc[k] = f.add(acc[k], f.mul(scale, x));
        }
    }

    /// Evaluates the multilinear map on dense vectors.
    pub fn apply(&self, args: &[&[Scalar]]) -> Vec<Scalar> {
        let mut acc = vec![0; self.out_dim];
        self.apply_into(&mut acc, args, 1);
        acc
    }

    /// `acc += scale * T(args)`.
    pub fn apply_into(&self, acc: &mut [Scalar], args: &[&[Scalar]], scale: Scalar) {
        assert_eq!(args.len(), self.arity(), "wrong number of arguments");
        let supports: Vec<Vec<(usize, Scalar)>> = args
            .iter()
            .zip(&self.in_dims)
            .map(|(a, &d)| {
                assert_eq!(a.len(), d, "argument length mismatch");
                a.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect()
            })
            .collect();
        if supports.iter().any(|s| s.is_empty()) || scale == 0 {
            return;
        }
        let f = self.field;
        let k = supports.len();
        let mut pos = vec![0usize; k];
        let mut idx = vec![0usize; k];
        loop {
            let mut c = scale;
            for t in 0..k {
                let (i, x) = supports[t][pos[t]];
                idx[t] = i;
                c = f.mul(c, x);
            }
            self.accumulate(acc, &idx, c);
            let mut t = k;
            loop {
                if t == 0 {
                    return;
                }
                t -= 1;
                pos[t] += 1;
                if pos[t] < supports[t].len() {
                    break;
                }
                pos[t] = 0;
            }
        }
    }

    /// All stored entries `(inputs, output, coefficient)` in key order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, usize, Scalar)> + '_ {
        let slots = self.offsets.len() - 1;
        (0..slots).flat_map(move |key| {
            let idx = unflatten(&self.in_dims, key);
            let (a, b) = (self.offsets[key] as usize, self.offsets[key + 1] as usize);
            (a..b).map(move |e| (idx.clone(), self.outs[e] as usize, self.coeffs[e]))
        })
    }

    /// Fixes the first `prefix.len()` arguments to basis vectors and returns the
    /// operator in the next argument as a matrix (columns are images).
    pub fn partial_operator(&self, prefix: &[usize]) -> crate::linalg::Matrix {
        assert_eq!(prefix.len() + 1, self.arity(), "partial_operator needs all but one argument");
        let n = *self.in_dims.last().unwrap();
        let mut m = crate::linalg::Matrix::zeros(self.field, self.out_dim, n);
        let mut idx = prefix.to_vec();
        idx.push(0);
        for j in 0..n {
            idx[prefix.len()] = j;
            let (o, c) = self.at(&idx);
            for (&k, &x) in o.iter().zip(c) {
                m.set(k as usize, j, x);
            }
        }
        m
    }
}

#[inline]
fn flat_index(dims: &[usize], idx: &[usize]) -> usize {
    let mut key = 0;
    for (&i, &d) in idx.iter().zip(dims) {
        debug_assert!(i < d, "index {i} out of range {d}");
        key = key * d + i;
    }
    key
}

fn unflatten(dims: &[usize], mut key: usize) -> Vec<usize> {
    let mut idx = vec![0; dims.len()];
    for t in (0..dims.len()).rev() {
        idx[t] = key % dims[t];
        key /= dims[t];
    }
    idx
}

/// Odometer increment over a box of indices; wraps to all zeros.
pub fn advance(idx: &mut [usize], dims: &[usize]) {
    for t in (0..idx.len()).rev() {
        idx[t] += 1;
        if idx[t] < dims[t] {
            return;
        }
        idx[t] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_drops_zeros() {
        let f = Field::three();
        let t = Tensor::from_entries(
            f,
            &[2, 2],
            2,
            vec![(vec![0, 1], 1, 1), (vec![0, 1], 1, 2), (vec![1, 1], 0, 2), (vec![1, 0], 0, 3)],
        );
        assert_eq!(t.nnz(), 1);
        assert_eq!(t.at_dense(&[1, 1]), vec![2, 0]);
        assert_eq!(t.at_dense(&[0, 1]), vec![0, 0]);
    }

    #[test]
    fn apply_is_multilinear_expansion() {
        let f = Field::three();
        // (i, j) -> e_{(i + j) mod 3}
        let t = Tensor::from_fn(f, &[3, 3], 3, |ij| f.unit_vec(3, (ij[0] + ij[1]) % 3));
        let x = [1, 2, 0];
        let y = [0, 1, 1];
        // oracle: sum over pairs by hand
        let mut expect = vec![0u8; 3];
        for i in 0..3 {
            for j in 0..3 {
                let c = f.mul(x[i], y[j]);
                expect[(i + j) % 3] = f.add(expect[(i + j) % 3], c);
            }
        }
        assert_eq!(t.apply(&[&x, &y]), expect);
    }

    #[test]
    fn entries_round_trip() {
        let f = Field::new(5).unwrap();
        let t = Tensor::from_fn(f, &[2, 3], 4, |ij| {
            let mut v = vec![0; 4];
            v[(ij[0] * 3 + ij[1]) % 4] = ((ij[0] + 2 * ij[1]) % 5) as u8;
            v
        });
        let u = Tensor::from_entries(f, &[2, 3], 4, t.entries());
        assert_eq!(t, u);
    }
}
