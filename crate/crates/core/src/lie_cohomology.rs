//! The Lie-side cochain machinery: alternating cochains, the
//! Chevalley-Eilenberg differential in the sign convention used throughout
//! this crate, the derivation operator, the twisting chain map, the
//! combined three-slot differential, matrix assembly and cohomology
//! dimensions.
//!
//! Sign convention: the differential of an `n`-cochain carries `(-1)^{i+n}`
//! on the action terms and `(-1)^{i+j+n+1}` on the bracket terms. This
//! differs from the common textbook normalization by a global `(-1)^{n+1}`
//! per degree; the combined differential's internal signs are tuned to it,
//! and all the chain-map identities asserted by the tests hold exactly in
//! this convention. Cohomology dimensions are unaffected.
//!
//! Cochain coordinates are ordered parts-first `(f, g, h)`, index tuples in
//! lexicographic order, target coordinates innermost. The order is fixed so
//! that assembled matrices and reports are reproducible byte-for-byte.

use crate::linalg::{
    axpy, basis_vec, quotient_dim, vec_is_zero, zero_vec, LinalgError, Matrix, Rational,
};
use crate::structures::{
    induced_bracket, induced_rep, LieAlgebra, LieRep, RbLieDerPair, RbLieDerRep, StructureError,
};
use num_traits::{One, Zero};
use thiserror::Error;

/// Default degree cap for the combined Lie complex.
pub const LIE_DEGREE_CAP: usize = 4;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("degree {degree} out of range (cap {cap})")]
    DegreeOutOfRange { degree: usize, cap: usize },
    #[error("cochain shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("operator undefined in degree zero")]
    DegreeZero,
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("internal invariant breach: {0}")]
    InternalInvariant(String),
}

// ---------------------------------------------------------------------------
// Wedge basis bookkeeping
// ---------------------------------------------------------------------------

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All strictly increasing `n`-tuples over `0..d`, in lexicographic order.
pub fn increasing_tuples(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(d, n));
    if n > d {
        return out;
    }
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // Advance to the next combination.
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + d - n {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in (i + 1)..n {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Lexicographic rank of an increasing tuple among `increasing_tuples(d, n)`.
pub fn tuple_rank(tuple: &[usize], d: usize) -> usize {
    let n = tuple.len();
    let mut rank = 0;
    let mut prev: isize = -1;
    for (i, &c) in tuple.iter().enumerate() {
        for v in (prev + 1) as usize..c {
            rank += binomial(d - 1 - v, n - 1 - i);
        }
        prev = c as isize;
    }
    rank
}

/// Sorts an index tuple, returning the permutation sign, or `None` when an
/// index repeats (the alternating value is zero).
pub fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = indices.to_vec();
    let mut sign = 1;
    // Insertion sort, counting swaps; tuples are tiny.
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

fn rational_pow(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

// ---------------------------------------------------------------------------
// Alternating cochains
// ---------------------------------------------------------------------------

/// Alternating multilinear map from `n`-fold wedge powers of the source to
/// the target space, stored on strictly increasing index tuples. Degree
/// zero is a single target vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieCochain {
    degree: usize,
    source_dim: usize,
    target_dim: usize,
    values: Vec<Vec<Rational>>,
}

impl LieCochain {
    pub fn zero(source_dim: usize, target_dim: usize, degree: usize) -> Self {
        let count = binomial(source_dim, degree);
        LieCochain {
            degree,
            source_dim,
            target_dim,
            values: vec![zero_vec(target_dim); count],
        }
    }

    pub fn from_values(
        source_dim: usize,
        target_dim: usize,
        degree: usize,
        values: Vec<Vec<Rational>>,
    ) -> Result<Self, CohomologyError> {
        let count = binomial(source_dim, degree);
        if values.len() != count {
            return Err(CohomologyError::ShapeMismatch(format!(
                "expected {count} values for degree {degree} over dimension {source_dim}, got {}",
                values.len()
            )));
        }
        for v in &values {
            if v.len() != target_dim {
                return Err(CohomologyError::ShapeMismatch(format!(
                    "value of length {} for target dimension {target_dim}",
                    v.len()
                )));
            }
        }
        Ok(LieCochain {
            degree,
            source_dim,
            target_dim,
            values,
        })
    }

    /// Degree-0 cochain: a single target vector.
    pub fn constant(source_dim: usize, value: Vec<Rational>) -> Self {
        LieCochain {
            degree: 0,
            source_dim,
            target_dim: value.len(),
            values: vec![value],
        }
    }

    /// Degree-1 cochain from a map matrix (columns are the values).
    pub fn from_matrix(mat: &Matrix) -> Self {
        LieCochain {
            degree: 1,
            source_dim: mat.cols(),
            target_dim: mat.rows(),
            values: (0..mat.cols()).map(|j| mat.column(j)).collect(),
        }
    }

    /// Degree-1 cochain back to a map matrix.
    pub fn to_matrix(&self) -> Option<Matrix> {
        if self.degree != 1 {
            return None;
        }
        Matrix::from_columns(self.target_dim, &self.values).ok()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    /// Value on an increasing tuple.
    pub fn value(&self, tuple: &[usize]) -> &[Rational] {
        debug_assert_eq!(tuple.len(), self.degree);
        &self.values[tuple_rank(tuple, self.source_dim)]
    }

    pub fn values(&self) -> &[Vec<Rational>] {
        &self.values
    }

    /// Value on an arbitrary index tuple, resolved by antisymmetry.
    pub fn value_signed(&self, indices: &[usize]) -> Vec<Rational> {
        match sort_with_sign(indices) {
            None => zero_vec(self.target_dim),
            Some((sorted, sign)) => {
                let v = self.value(&sorted);
                if sign == 1 {
                    v.to_vec()
                } else {
                    v.iter().map(|e| -e).collect()
                }
            }
        }
    }

    /// Full multilinear alternating evaluation on coefficient vectors.
    pub fn eval(&self, args: &[&[Rational]]) -> Vec<Rational> {
        assert_eq!(args.len(), self.degree, "argument count mismatch");
        let mut out = zero_vec(self.target_dim);
        if self.degree == 0 {
            out.clone_from(&self.values[0]);
            return out;
        }
        // Nonzero support of each argument.
        let supports: Vec<Vec<(usize, &Rational)>> = args
            .iter()
            .map(|a| {
                assert_eq!(a.len(), self.source_dim);
                a.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (i, c))
                    .collect()
            })
            .collect();
        if supports.iter().any(|s| s.is_empty()) {
            // A zero argument short-circuits the whole sum.
            return out;
        }
        let mut idx = vec![0usize; self.degree];
        let mut tuple = vec![0usize; self.degree];
        'outer: loop {
            let mut coeff = Rational::one();
            for (p, &i) in idx.iter().enumerate() {
                let (basis_idx, c) = supports[p][i];
                tuple[p] = basis_idx;
                coeff *= c;
            }
            if let Some((sorted, sign)) = sort_with_sign(&tuple) {
                let signed = if sign == 1 { coeff } else { -coeff };
                axpy(&mut out, &signed, self.value(&sorted));
            }
            // Advance the mixed-radix counter over supports.
            for p in (0..self.degree).rev() {
                idx[p] += 1;
                if idx[p] < supports[p].len() {
                    continue 'outer;
                }
                idx[p] = 0;
                if p == 0 {
                    break 'outer;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| vec_is_zero(v))
    }

    pub fn add(&self, other: &LieCochain) -> Result<LieCochain, CohomologyError> {
        self.check_same_shape(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(LieCochain {
            degree: self.degree,
            source_dim: self.source_dim,
            target_dim: self.target_dim,
            values,
        })
    }

    pub fn sub(&self, other: &LieCochain) -> Result<LieCochain, CohomologyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LieCochain {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> LieCochain {
        LieCochain {
            degree: self.degree,
            source_dim: self.source_dim,
            target_dim: self.target_dim,
            values: self
                .values
                .iter()
                .map(|v| v.iter().map(|e| e * c).collect())
                .collect(),
        }
    }

    fn check_same_shape(&self, other: &LieCochain) -> Result<(), CohomologyError> {
        if self.degree != other.degree
            || self.source_dim != other.source_dim
            || self.target_dim != other.target_dim
        {
            return Err(CohomologyError::ShapeMismatch(format!(
                "degree {}/{} source {}/{} target {}/{}",
                self.degree,
                other.degree,
                self.source_dim,
                other.source_dim,
                self.target_dim,
                other.target_dim
            )));
        }
        Ok(())
    }

    /// Flat coordinates: tuples in lex order, target coordinates innermost.
    pub fn coords(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.values.len() * self.target_dim);
        for v in &self.values {
            out.extend(v.iter().cloned());
        }
        out
    }

    pub fn from_coords(
        source_dim: usize,
        target_dim: usize,
        degree: usize,
        coords: &[Rational],
    ) -> Result<Self, CohomologyError> {
        let count = binomial(source_dim, degree);
        if coords.len() != count * target_dim {
            return Err(CohomologyError::ShapeMismatch(format!(
                "expected {} coordinates, got {}",
                count * target_dim,
                coords.len()
            )));
        }
        let values = coords
            .chunks(target_dim)
            .map(|c| c.to_vec())
            .collect::<Vec<_>>();
        LieCochain::from_values(source_dim, target_dim, degree, values)
    }
}

// ---------------------------------------------------------------------------
// Differentials on plain cochains
// ---------------------------------------------------------------------------

/// Chevalley-Eilenberg differential of `f` with respect to `rep`, in the
/// sign convention of this crate (see the module docs).
pub fn ce_diff(
    alg: &LieAlgebra,
    rep: &LieRep,
    f: &LieCochain,
) -> Result<LieCochain, CohomologyError> {
    let n = f.degree();
    let d = alg.dim();
    let m = rep.space_dim();
    if f.source_dim() != d || f.target_dim() != m {
        return Err(CohomologyError::ShapeMismatch(format!(
            "cochain over dim {} -> {} applied to algebra dim {} with module dim {}",
            f.source_dim(),
            f.target_dim(),
            d,
            m
        )));
    }
    let mut out = LieCochain::zero(d, m, n + 1);
    let n_sign = |k: usize| -> i32 {
        if k % 2 == 0 {
            1
        } else {
            -1
        }
    };
    for (rank, tuple) in increasing_tuples(d, n + 1).iter().enumerate() {
        let mut acc = zero_vec(m);
        // Action terms: position a (0-based) corresponds to i = a + 1,
        // sign (-1)^{i+n}.
        for a in 0..=n {
            let mut sub = tuple.clone();
            sub.remove(a);
            let v = f.value(&sub);
            let applied = rep.action(tuple[a]).apply(v);
            let s = n_sign(a + 1 + n);
            axpy(&mut acc, &crate::linalg::rat(s as i64), &applied);
        }
        // Bracket terms: positions a < b, sign (-1)^{i+j+n+1} with
        // i = a + 1, j = b + 1.
        for a in 0..=n {
            for b in (a + 1)..=n {
                let mut rest = tuple.clone();
                rest.remove(b);
                rest.remove(a);
                let bracket = alg.bracket_basis(tuple[a], tuple[b]);
                let s = n_sign(a + 1 + b + 1 + n + 1);
                for (k, c) in bracket.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    // Insert k in front of the increasing rest and resolve
                    // by antisymmetry.
                    let mut indices = Vec::with_capacity(n);
                    indices.push(k);
                    indices.extend_from_slice(&rest);
                    let val = f.value_signed(&indices);
                    let coeff = if s == 1 { c.clone() } else { -c.clone() };
                    axpy(&mut acc, &coeff, &val);
                }
            }
        }
        out.values[rank] = acc;
    }
    Ok(out)
}

/// Derivation operator: same-degree map
/// `f -> sum_i f(.., delta x_i, ..) - delta_V . f`.
pub fn partial_op(
    delta: &Matrix,
    delta_v: &Matrix,
    f: &LieCochain,
) -> Result<LieCochain, CohomologyError> {
    let n = f.degree();
    if n == 0 {
        return Err(CohomologyError::DegreeZero);
    }
    let d = f.source_dim();
    let m = f.target_dim();
    if delta.cols() != d || delta.rows() != d || delta_v.rows() != m || delta_v.cols() != m {
        return Err(CohomologyError::ShapeMismatch(
            "derivation matrices do not match the cochain".into(),
        ));
    }
    let mut out = LieCochain::zero(d, m, n);
    for (rank, tuple) in increasing_tuples(d, n).iter().enumerate() {
        let mut acc = delta_v.apply(f.value(tuple));
        for e in &mut acc {
            *e = -e.clone();
        }
        for p in 0..n {
            let col = delta.column(tuple[p]);
            for (k, c) in col.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut indices = tuple.clone();
                indices[p] = k;
                let val = f.value_signed(&indices);
                axpy(&mut acc, c, &val);
            }
        }
        out.values[rank] = acc;
    }
    Ok(out)
}

/// Twisting chain map into the descendant complex: degree 0 is the
/// identity, and in degree `n >= 1`
/// `f(R x_1, .., R x_n) - sum_{k=0}^{n-1} w^{n-k-1} sum_{|S|=k} T f(R at S)`.
pub fn phi_map(
    rb: &Matrix,
    t: &Matrix,
    weight: &Rational,
    f: &LieCochain,
) -> Result<LieCochain, CohomologyError> {
    let n = f.degree();
    if n == 0 {
        return Ok(f.clone());
    }
    let d = f.source_dim();
    let m = f.target_dim();
    if rb.cols() != d || rb.rows() != d || t.rows() != m || t.cols() != m {
        return Err(CohomologyError::ShapeMismatch(
            "operator matrices do not match the cochain".into(),
        ));
    }
    let r_cols: Vec<Vec<Rational>> = (0..d).map(|j| rb.column(j)).collect();
    let basis: Vec<Vec<Rational>> = (0..d).map(|j| basis_vec(d, j)).collect();
    let mut out = LieCochain::zero(d, m, n);
    for (rank, tuple) in increasing_tuples(d, n).iter().enumerate() {
        // Leading term: every argument twisted.
        let args: Vec<&[Rational]> = tuple.iter().map(|&i| r_cols[i].as_slice()).collect();
        let mut acc = f.eval(&args);
        // Correction terms: T applied outside, R on a proper subset.
        for k in 0..n {
            let lam = rational_pow(weight, n - k - 1);
            for subset in increasing_tuples(n, k) {
                let mut args: Vec<&[Rational]> =
                    tuple.iter().map(|&i| basis[i].as_slice()).collect();
                for &pos in &subset {
                    args[pos] = r_cols[tuple[pos]].as_slice();
                }
                let inner = f.eval(&args);
                let applied = t.apply(&inner);
                axpy(&mut acc, &-lam.clone(), &applied);
            }
        }
        out.values[rank] = acc;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// The combined complex
// ---------------------------------------------------------------------------

/// Cochain of the combined complex: an `(f, g, h)` triple in degree
/// `n >= 2` (with `g`, `h` one degree lower, `h` read over the descendant
/// structures); degree 1 carries only `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieCochainTriple {
    degree: usize,
    f: LieCochain,
    g: Option<LieCochain>,
    h: Option<LieCochain>,
}

impl LieCochainTriple {
    pub fn degree_one(f: LieCochain) -> Result<Self, CohomologyError> {
        if f.degree() != 1 {
            return Err(CohomologyError::ShapeMismatch(format!(
                "degree-1 triple needs a degree-1 cochain, got degree {}",
                f.degree()
            )));
        }
        Ok(LieCochainTriple {
            degree: 1,
            f,
            g: None,
            h: None,
        })
    }

    pub fn new(f: LieCochain, g: LieCochain, h: LieCochain) -> Result<Self, CohomologyError> {
        let n = f.degree();
        if n < 2 {
            return Err(CohomologyError::ShapeMismatch(
                "triples with g and h parts start in degree 2".into(),
            ));
        }
        for (part, name) in [(&g, "g"), (&h, "h")] {
            if part.degree() != n - 1
                || part.source_dim() != f.source_dim()
                || part.target_dim() != f.target_dim()
            {
                return Err(CohomologyError::ShapeMismatch(format!(
                    "{name} part does not match the f part"
                )));
            }
        }
        Ok(LieCochainTriple {
            degree: n,
            f,
            g: Some(g),
            h: Some(h),
        })
    }

    pub fn zero(source_dim: usize, target_dim: usize, degree: usize) -> Self {
        if degree == 1 {
            LieCochainTriple {
                degree,
                f: LieCochain::zero(source_dim, target_dim, 1),
                g: None,
                h: None,
            }
        } else {
            LieCochainTriple {
                degree,
                f: LieCochain::zero(source_dim, target_dim, degree),
                g: Some(LieCochain::zero(source_dim, target_dim, degree - 1)),
                h: Some(LieCochain::zero(source_dim, target_dim, degree - 1)),
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn f(&self) -> &LieCochain {
        &self.f
    }

    pub fn g(&self) -> Option<&LieCochain> {
        self.g.as_ref()
    }

    pub fn h(&self) -> Option<&LieCochain> {
        self.h.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero()
            && self.g.as_ref().map_or(true, |g| g.is_zero())
            && self.h.as_ref().map_or(true, |h| h.is_zero())
    }

    pub fn coords(&self) -> Vec<Rational> {
        let mut out = self.f.coords();
        if let Some(g) = &self.g {
            out.extend(g.coords());
        }
        if let Some(h) = &self.h {
            out.extend(h.coords());
        }
        out
    }

    pub fn from_coords(
        source_dim: usize,
        target_dim: usize,
        degree: usize,
        coords: &[Rational],
    ) -> Result<Self, CohomologyError> {
        let expected = lie_triple_dim(source_dim, target_dim, degree);
        if coords.len() != expected {
            return Err(CohomologyError::ShapeMismatch(format!(
                "expected {expected} coordinates in degree {degree}, got {}",
                coords.len()
            )));
        }
        if degree == 1 {
            let f = LieCochain::from_coords(source_dim, target_dim, 1, coords)?;
            LieCochainTriple::degree_one(f)
        } else {
            let nf = binomial(source_dim, degree) * target_dim;
            let ng = binomial(source_dim, degree - 1) * target_dim;
            let f = LieCochain::from_coords(source_dim, target_dim, degree, &coords[..nf])?;
            let g = LieCochain::from_coords(
                source_dim,
                target_dim,
                degree - 1,
                &coords[nf..nf + ng],
            )?;
            let h = LieCochain::from_coords(source_dim, target_dim, degree - 1, &coords[nf + ng..])?;
            LieCochainTriple::new(f, g, h)
        }
    }

    pub fn sub(&self, other: &LieCochainTriple) -> Result<LieCochainTriple, CohomologyError> {
        if self.degree != other.degree {
            return Err(CohomologyError::ShapeMismatch("triple degree mismatch".into()));
        }
        let f = self.f.sub(&other.f)?;
        match (&self.g, &other.g, &self.h, &other.h) {
            (Some(g1), Some(g2), Some(h1), Some(h2)) => {
                LieCochainTriple::new(f, g1.sub(g2)?, h1.sub(h2)?)
            }
            (None, None, None, None) => LieCochainTriple::degree_one(f),
            _ => Err(CohomologyError::ShapeMismatch("triple part mismatch".into())),
        }
    }
}

/// Dimension of the combined cochain space in the given degree.
pub fn lie_triple_dim(source_dim: usize, target_dim: usize, degree: usize) -> usize {
    if degree == 0 {
        0
    } else if degree == 1 {
        source_dim * target_dim
    } else {
        binomial(source_dim, degree) * target_dim
            + 2 * binomial(source_dim, degree - 1) * target_dim
    }
}

/// Dimensions of a single cohomology degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub degree: usize,
    pub dim_cochains: usize,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    pub dim_h: usize,
}

/// The combined complex of a weighted Rota-Baxter Lie pair with derivation
/// and a representation; owns the descendant structures so differentials
/// and assembly reuse them.
pub struct LieComplex {
    pair: RbLieDerPair,
    rep: RbLieDerRep,
    twisted_pair: RbLieDerPair,
    twisted_rep: RbLieDerRep,
}

impl LieComplex {
    pub fn new(pair: RbLieDerPair, rep: RbLieDerRep) -> Result<Self, CohomologyError> {
        let twisted_pair = induced_bracket(&pair)?;
        let twisted_rep = induced_rep(&pair, &rep)?;
        Ok(LieComplex {
            pair,
            rep,
            twisted_pair,
            twisted_rep,
        })
    }

    pub fn adjoint(pair: RbLieDerPair) -> Result<Self, CohomologyError> {
        let rep = RbLieDerRep::adjoint(&pair);
        LieComplex::new(pair, rep)
    }

    pub fn pair(&self) -> &RbLieDerPair {
        &self.pair
    }

    pub fn rep(&self) -> &RbLieDerRep {
        &self.rep
    }

    pub fn twisted_pair(&self) -> &RbLieDerPair {
        &self.twisted_pair
    }

    pub fn twisted_rep(&self) -> &RbLieDerRep {
        &self.twisted_rep
    }

    pub fn source_dim(&self) -> usize {
        self.pair.dim()
    }

    pub fn target_dim(&self) -> usize {
        self.rep.space_dim()
    }

    /// Plain differential (first slot).
    pub fn ce_diff(&self, f: &LieCochain) -> Result<LieCochain, CohomologyError> {
        ce_diff(self.pair.algebra(), self.rep.rep(), f)
    }

    /// Derivation operator with this pair's maps.
    pub fn partial_op(&self, f: &LieCochain) -> Result<LieCochain, CohomologyError> {
        partial_op(self.pair.delta(), self.rep.delta_v(), f)
    }

    /// Twisting chain map with this pair's operator data.
    pub fn phi_map(&self, f: &LieCochain) -> Result<LieCochain, CohomologyError> {
        phi_map(self.pair.rb(), self.rep.t(), self.pair.weight(), f)
    }

    /// Differential over the descendant bracket and twisted action.
    pub fn dr_diff(&self, h: &LieCochain) -> Result<LieCochain, CohomologyError> {
        ce_diff(self.twisted_pair.algebra(), self.twisted_rep.rep(), h)
    }

    /// The combined differential:
    /// degree 1: `f -> (d f, -partial f, -phi f)`;
    /// degree n >= 2: `(f, g, h) -> (d f, d g + (-1)^n partial f,
    /// -d_R h - phi f)`.
    pub fn big_d(&self, c: &LieCochainTriple) -> Result<LieCochainTriple, CohomologyError> {
        let n = c.degree();
        if n == 0 {
            return Err(CohomologyError::DegreeZero);
        }
        let df = self.ce_diff(c.f())?;
        if n == 1 {
            let g = self.partial_op(c.f())?.neg();
            let h = self.phi_map(c.f())?.neg();
            return LieCochainTriple::new(df, g, h);
        }
        let g = c.g().expect("degree >= 2 carries g");
        let h = c.h().expect("degree >= 2 carries h");
        let mut mid = self.ce_diff(g)?;
        let pf = self.partial_op(c.f())?;
        mid = if n % 2 == 0 {
            mid.add(&pf)?
        } else {
            mid.sub(&pf)?
        };
        let last = self.dr_diff(h)?.neg().sub(&self.phi_map(c.f())?)?;
        LieCochainTriple::new(df, mid, last)
    }

    /// Matrix of the combined differential on the canonical cochain basis,
    /// shape `dim c^{n+1} x dim c^n`.
    pub fn assemble_matrix(&self, degree: usize) -> Result<Matrix, CohomologyError> {
        self.assemble_matrix_with_cap(degree, LIE_DEGREE_CAP)
    }

    pub fn assemble_matrix_with_cap(
        &self,
        degree: usize,
        cap: usize,
    ) -> Result<Matrix, CohomologyError> {
        if degree == 0 || degree > cap {
            return Err(CohomologyError::DegreeOutOfRange { degree, cap });
        }
        let d = self.source_dim();
        let m = self.target_dim();
        let ncols = lie_triple_dim(d, m, degree);
        let nrows = lie_triple_dim(d, m, degree + 1);
        let mut columns = Vec::with_capacity(ncols);
        let mut coords = vec![Rational::zero(); ncols];
        for j in 0..ncols {
            coords[j] = Rational::one();
            let basis = LieCochainTriple::from_coords(d, m, degree, &coords)?;
            coords[j] = Rational::zero();
            let image = self.big_d(&basis)?;
            columns.push(image.coords());
        }
        Matrix::from_columns(nrows, &columns).map_err(CohomologyError::from)
    }

    /// Cocycle, coboundary and quotient dimensions in the given degree.
    pub fn cohomology(&self, degree: usize) -> Result<CohomologyReport, CohomologyError> {
        self.cohomology_with_cap(degree, LIE_DEGREE_CAP)
    }

    pub fn cohomology_with_cap(
        &self,
        degree: usize,
        cap: usize,
    ) -> Result<CohomologyReport, CohomologyError> {
        if degree == 0 || degree > cap {
            return Err(CohomologyError::DegreeOutOfRange { degree, cap });
        }
        let d_n = self.assemble_matrix_with_cap(degree, cap)?;
        let dim_cochains = d_n.cols();
        let dim_cocycles = dim_cochains - d_n.rank();
        // The degree-0 cochain space of the combined complex is zero, so
        // there are no coboundaries in degree 1.
        let dim_coboundaries = if degree == 1 {
            0
        } else {
            self.assemble_matrix_with_cap(degree - 1, cap)?.rank()
        };
        let dim_h = quotient_dim(dim_cocycles, dim_coboundaries)?;
        Ok(CohomologyReport {
            degree,
            dim_cochains,
            dim_cocycles,
            dim_coboundaries,
            dim_h,
        })
    }

    /// Basis of `{f : d f = 0, f delta = delta_V f, f R = T f}`, built from
    /// the intertwiner systems directly (not through the assembled
    /// differential). Its size must agree with the degree-1 cohomology
    /// dimension; disagreement is reported as an internal invariant breach.
    pub fn h1_characterization(&self) -> Result<Vec<Matrix>, CohomologyError> {
        let d = self.source_dim();
        let m = self.target_dim();
        let dim = d * m;
        // vec(f)[j*m + coord] = f(e_j)_coord, matching cochain coordinates.
        let unit = |j: usize, b: usize| {
            let mut mat = Matrix::zeros(m, d);
            mat.set(b, j, Rational::one());
            mat
        };
        let linearize = |op: &dyn Fn(&Matrix) -> Matrix, rows: usize| {
            let mut cols = Vec::with_capacity(dim);
            for j in 0..d {
                for b in 0..m {
                    let image = op(&unit(j, b));
                    let mut flat = Vec::with_capacity(rows);
                    for jj in 0..image.cols() {
                        flat.extend(image.column(jj));
                    }
                    cols.push(flat);
                }
            }
            Matrix::from_columns(rows, &cols).expect("uniform columns")
        };
        // d f = 0 rows.
        let alg = self.pair.algebra();
        let rep = self.rep.rep();
        let d_rows = binomial(d, 2) * m;
        let d_mat = {
            let mut cols = Vec::with_capacity(dim);
            for j in 0..d {
                for b in 0..m {
                    let f = LieCochain::from_matrix(&unit(j, b));
                    cols.push(ce_diff(alg, rep, &f)?.coords());
                }
            }
            Matrix::from_columns(d_rows, &cols)?
        };
        // Intertwiner rows, as raw matrix algebra.
        let delta = self.pair.delta().clone();
        let delta_v = self.rep.delta_v().clone();
        let comm_delta = linearize(
            &move |f: &Matrix| {
                f.mul(&delta)
                    .expect("shapes")
                    .sub(&delta_v.mul(f).expect("shapes"))
                    .expect("same shape")
            },
            dim,
        );
        let rb = self.pair.rb().clone();
        let t = self.rep.t().clone();
        let comm_rb = linearize(
            &move |f: &Matrix| {
                f.mul(&rb)
                    .expect("shapes")
                    .sub(&t.mul(f).expect("shapes"))
                    .expect("same shape")
            },
            dim,
        );
        let stacked = d_mat.stack(&comm_delta)?.stack(&comm_rb)?;
        let kernel = stacked.kernel_basis();
        let expected = self.cohomology(1)?.dim_h;
        if kernel.len() != expected {
            return Err(CohomologyError::InternalInvariant(format!(
                "degree-1 characterization has dimension {}, cohomology says {}",
                kernel.len(),
                expected
            )));
        }
        let mut out = Vec::with_capacity(kernel.len());
        for v in kernel {
            let mut mat = Matrix::zeros(m, d);
            for j in 0..d {
                for b in 0..m {
                    mat.set(b, j, v[j * m + b].clone());
                }
            }
            out.push(mat);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::linalg::rat;
    use crate::structures::RbLieDerRep;

    fn b2_pair(delta: Matrix, rb: Matrix, w: i64) -> RbLieDerPair {
        RbLieDerPair::new(corpus::b2_algebra(), delta, rb, rat(w)).unwrap()
    }

    #[test]
    fn tuple_rank_matches_enumeration() {
        for d in 0..6 {
            for n in 0..=d {
                for (rank, t) in increasing_tuples(d, n).iter().enumerate() {
                    assert_eq!(tuple_rank(t, d), rank, "d={d} n={n} t={t:?}");
                }
            }
        }
    }

    #[test]
    fn sorting_signs() {
        assert_eq!(sort_with_sign(&[0, 1, 2]), Some((vec![0, 1, 2], 1)));
        assert_eq!(sort_with_sign(&[1, 0, 2]), Some((vec![0, 1, 2], -1)));
        assert_eq!(sort_with_sign(&[2, 0, 1]), Some((vec![0, 1, 2], 1)));
        assert_eq!(sort_with_sign(&[1, 1]), None);
    }

    #[test]
    fn degree_zero_differential_is_negated_action() {
        // (d v)(x) = -rho(x) v in this sign convention.
        let pair = b2_pair(Matrix::zeros(2, 2), Matrix::zeros(2, 2), 0);
        let rep = RbLieDerRep::adjoint(&pair);
        let v = LieCochain::constant(2, vec![rat(0), rat(1)]); // e2
        let dv = ce_diff(pair.algebra(), rep.rep(), &v).unwrap();
        // (d v)(e1) = -[e1, e2] = -e2; (d v)(e2) = -[e2, e2] = 0.
        assert_eq!(dv.value(&[0]), &[rat(0), rat(-1)]);
        assert_eq!(dv.value(&[1]), &[rat(0), rat(0)]);
    }

    #[test]
    fn degree_one_differential_of_identity_on_b2() {
        // d(id)(e1,e2) = [e1,e2] - [e2,e1] - [e1,e2] = e2.
        let pair = b2_pair(Matrix::zeros(2, 2), Matrix::zeros(2, 2), 0);
        let rep = RbLieDerRep::adjoint(&pair);
        let f = LieCochain::from_matrix(&Matrix::identity(2));
        let df = ce_diff(pair.algebra(), rep.rep(), &f).unwrap();
        assert_eq!(df.value(&[0, 1]), &[rat(0), rat(1)]);
    }

    #[test]
    fn zero_cochain_maps_to_zero() {
        let pair = b2_pair(Matrix::zeros(2, 2), Matrix::zeros(2, 2), 0);
        let rep = RbLieDerRep::adjoint(&pair);
        let f = LieCochain::zero(2, 2, 1);
        assert!(ce_diff(pair.algebra(), rep.rep(), &f).unwrap().is_zero());
    }

    #[test]
    fn partial_op_examples() {
        let delta = Matrix::from_int_rows(&[&[0, 0], &[0, 1]]);
        // Commutator form in degree 1: partial f = f delta - delta_V f.
        // With f = delta (and delta_V = delta) this vanishes.
        let f = LieCochain::from_matrix(&delta);
        assert!(partial_op(&delta, &delta, &f).unwrap().is_zero());
        // f: e1 -> e2, e2 -> 0 gives a nonzero commutator.
        let f = LieCochain::from_matrix(&Matrix::from_int_rows(&[&[0, 0], &[1, 0]]));
        let pf = partial_op(&delta, &delta, &f).unwrap();
        assert_eq!(pf.value(&[0]), &[rat(0), rat(-1)]);
        assert_eq!(pf.value(&[1]), &[rat(0), rat(0)]);
        // Zero maps annihilate.
        let z = Matrix::zeros(2, 2);
        assert!(partial_op(&z, &z, &f).unwrap().is_zero());
        // Degree 0 is rejected.
        let c = LieCochain::constant(2, vec![rat(1), rat(0)]);
        assert!(matches!(
            partial_op(&z, &z, &c),
            Err(CohomologyError::DegreeZero)
        ));
    }

    #[test]
    fn phi_degree_one_two_term_form() {
        // phi(f)(x) = f(Rx) - T f(x).
        let rb = Matrix::from_int_rows(&[&[0, 0], &[0, -1]]);
        let t = rb.clone();
        let f = LieCochain::from_matrix(&Matrix::from_int_rows(&[&[1, 2], &[3, 4]]));
        let pf = phi_map(&rb, &t, &rat(1), &f).unwrap();
        let f_mat = f.to_matrix().unwrap();
        let expected = f_mat.mul(&rb).unwrap().sub(&t.mul(&f_mat).unwrap()).unwrap();
        assert_eq!(pf.to_matrix().unwrap(), expected);
    }

    #[test]
    fn phi_degree_two_four_term_form() {
        // phi(f)(x,y) = f(Rx,Ry) - w T f(x,y) - T f(Rx,y) - T f(x,Ry).
        let rb = Matrix::from_int_rows(&[&[1, 2], &[0, 3]]);
        let t = Matrix::from_int_rows(&[&[2, 0], &[1, 1]]);
        let w = rat(5);
        let d = 2;
        let f = LieCochain::from_values(d, d, 2, vec![vec![rat(7), rat(-2)]]).unwrap();
        let pf = phi_map(&rb, &t, &w, &f).unwrap();
        let e1 = basis_vec(d, 0);
        let e2 = basis_vec(d, 1);
        let r1 = rb.column(0);
        let r2 = rb.column(1);
        let mut expected = f.eval(&[&r1, &r2]);
        let mut corr = t.apply(&f.eval(&[&e1, &e2]));
        for c in &mut corr {
            *c *= &w;
        }
        for (a, b) in expected.iter_mut().zip(&corr) {
            *a -= b;
        }
        let c1 = t.apply(&f.eval(&[&r1, &e2]));
        let c2 = t.apply(&f.eval(&[&e1, &r2]));
        for i in 0..d {
            expected[i] = expected[i].clone() - &c1[i] - &c2[i];
        }
        assert_eq!(pf.value(&[0, 1]), expected.as_slice());
    }

    #[test]
    fn phi_vanishes_without_operators() {
        let z = Matrix::zeros(2, 2);
        let f = LieCochain::from_matrix(&Matrix::from_int_rows(&[&[1, 2], &[3, 4]]));
        assert!(phi_map(&z, &z, &rat(0), &f).unwrap().is_zero());
    }

    #[test]
    fn big_d_of_identity_on_b2() {
        // Pair: delta = diag(0,1), R = -id, w = 1, adjoint. For f = id:
        // the first slot is d(id), the partial and phi slots vanish.
        let pair = b2_pair(
            Matrix::from_int_rows(&[&[0, 0], &[0, 1]]),
            Matrix::identity(2).scale(&rat(-1)),
            1,
        );
        let complex = LieComplex::adjoint(pair).unwrap();
        let c = LieCochainTriple::degree_one(LieCochain::from_matrix(&Matrix::identity(2))).unwrap();
        let image = complex.big_d(&c).unwrap();
        assert_eq!(image.f().value(&[0, 1]), &[rat(0), rat(1)]);
        assert!(image.g().unwrap().is_zero());
        assert!(image.h().unwrap().is_zero());
    }

    #[test]
    fn big_d_squares_to_zero_on_b2() {
        let pair = b2_pair(
            Matrix::from_int_rows(&[&[0, 0], &[0, 1]]),
            Matrix::identity(2).scale(&rat(-1)),
            1,
        );
        let complex = LieComplex::adjoint(pair).unwrap();
        for n in 1..=3 {
            let d_n = complex.assemble_matrix(n).unwrap();
            let d_next = complex.assemble_matrix(n + 1).unwrap();
            assert!(d_next.mul(&d_n).unwrap().is_zero(), "degree {n}");
        }
    }

    #[test]
    fn assembled_shapes() {
        // d = 2, m = 2: degree 1 has 4 columns, degree 2 has 10.
        let pair = b2_pair(Matrix::zeros(2, 2), Matrix::zeros(2, 2), 0);
        let complex = LieComplex::adjoint(pair).unwrap();
        assert_eq!(complex.assemble_matrix(1).unwrap().cols(), 4);
        assert_eq!(complex.assemble_matrix(2).unwrap().cols(), 10);
        assert_eq!(lie_triple_dim(2, 2, 2), 10);
        assert!(matches!(
            complex.assemble_matrix(9),
            Err(CohomologyError::DegreeOutOfRange { .. })
        ));
    }

    #[test]
    fn zero_structure_assembles_zero() {
        let pair = RbLieDerPair::new(
            crate::structures::LieAlgebra::abelian(2),
            Matrix::zeros(2, 2),
            Matrix::zeros(2, 2),
            rat(0),
        )
        .unwrap();
        let complex = LieComplex::adjoint(pair).unwrap();
        assert!(complex.assemble_matrix(1).unwrap().is_zero());
        assert!(complex.assemble_matrix(2).unwrap().is_zero());
    }

    #[test]
    fn b2_first_cohomology_is_two_dimensional() {
        // Oracle: with all maps zero the degree-1 cocycles are exactly the
        // derivations of b2, a 2-dimensional space, and there are no
        // coboundaries.
        let pair = b2_pair(Matrix::zeros(2, 2), Matrix::zeros(2, 2), 0);
        let complex = LieComplex::adjoint(pair).unwrap();
        let report = complex.cohomology(1).unwrap();
        assert_eq!(report.dim_cochains, 4);
        assert_eq!(report.dim_cocycles, 2);
        assert_eq!(report.dim_coboundaries, 0);
        assert_eq!(report.dim_h, 2);
    }

    #[test]
    fn one_dim_abelian_first_cohomology() {
        let pair = RbLieDerPair::new(
            crate::structures::LieAlgebra::abelian(1),
            Matrix::zeros(1, 1),
            Matrix::zeros(1, 1),
            rat(0),
        )
        .unwrap();
        let complex = LieComplex::adjoint(pair).unwrap();
        assert_eq!(complex.cohomology(1).unwrap().dim_h, 1);
    }

    #[test]
    fn h1_agreement_across_corpus() {
        for entry in corpus::lie_corpus() {
            let complex = LieComplex::new(entry.pair.clone(), entry.rep.clone()).unwrap();
            let basis = complex.h1_characterization().unwrap();
            assert_eq!(
                basis.len(),
                complex.cohomology(1).unwrap().dim_h,
                "entry {}",
                entry.name
            );
        }
    }

    #[test]
    fn evaluation_is_antisymmetric() {
        let f = LieCochain::from_values(
            3,
            2,
            2,
            vec![
                vec![rat(1), rat(2)],
                vec![rat(3), rat(4)],
                vec![rat(5), rat(6)],
            ],
        )
        .unwrap();
        let x = vec![rat(1), rat(2), rat(-1)];
        let y = vec![rat(0), rat(3), rat(5)];
        let xy = f.eval(&[&x, &y]);
        let yx = f.eval(&[&y, &x]);
        for (a, b) in xy.iter().zip(&yx) {
            assert_eq!(a, &-b.clone());
        }
        assert!(vec_is_zero(&f.eval(&[&x, &x])));
    }
}
