//! Algebraic structures given by structure constants, their axiom
//! verifiers, and the induced / semidirect / skew-symmetrized constructions.
//!
//! Constructors validate eagerly: a value of one of these types always
//! satisfies its axioms, and a failed axiom surfaces as a
//! [`StructureError::AxiomFailed`] carrying a witness. Verifier methods
//! (`check_*`) stay public so callers can re-run the checks on constructed
//! outputs and report witnesses.
//!
//! Conventions: a map matrix has the images of the domain basis as its
//! columns. Lie structure constants are stored for ordered pairs `i < j`
//! only, so antisymmetry holds by construction and cannot be falsified by
//! input data.

use crate::linalg::{
    axpy, basis_vec, format_vec, vec_is_zero, zero_vec, Matrix, Rational,
};
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

/// Outcome of an axiom check, with a counterexample on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Violation),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(v) => Some(v),
        }
    }
}

/// First witness of a failed law: which law, on which basis indices, and
/// the nonzero residual vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub law: String,
    pub indices: Vec<usize>,
    pub residual: Vec<Rational>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails on basis indices {:?} with residual {}",
            self.law,
            self.indices,
            format_vec(&self.residual)
        )
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("structure constant triple must have i < j, got ({0}, {1})")]
    BadTriple(usize, usize),
    #[error("{0}")]
    AxiomFailed(Violation),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(Violation),
    #[error("internal invariant breach: {0}")]
    InternalInvariant(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "holds"),
            Verdict::Fails(v) => write!(f, "{v}"),
        }
    }
}

fn require(verdict: Verdict) -> Result<(), StructureError> {
    match verdict {
        Verdict::Holds => Ok(()),
        Verdict::Fails(v) => Err(StructureError::AxiomFailed(v)),
    }
}

fn require_rep(verdict: Verdict) -> Result<(), StructureError> {
    match verdict {
        Verdict::Holds => Ok(()),
        Verdict::Fails(v) => Err(StructureError::InvalidRepresentation(v)),
    }
}

fn default_names(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("e{i}")).collect()
}

fn check_square(mat: &Matrix, dim: usize, what: &str) -> Result<(), StructureError> {
    if mat.rows() != dim || mat.cols() != dim {
        return Err(StructureError::DimensionMismatch(format!(
            "{what} must be {dim}x{dim}, got {}x{}",
            mat.rows(),
            mat.cols()
        )));
    }
    Ok(())
}

/// Checks `f g = g f` for two square maps of equal size.
pub fn check_commute(f: &Matrix, g: &Matrix) -> Result<Verdict, StructureError> {
    if !f.is_square() || !g.is_square() || f.rows() != g.rows() {
        return Err(StructureError::DimensionMismatch(format!(
            "commuting check needs equal square matrices, got {}x{} and {}x{}",
            f.rows(),
            f.cols(),
            g.rows(),
            g.cols()
        )));
    }
    let fg = f.mul(g).expect("square sizes agree");
    let gf = g.mul(f).expect("square sizes agree");
    let diff = fg.sub(&gf).expect("same shape");
    if diff.is_zero() {
        return Ok(Verdict::Holds);
    }
    // Witness: first column with a nonzero commutator entry.
    for j in 0..diff.cols() {
        let col = diff.column(j);
        if !vec_is_zero(&col) {
            return Ok(Verdict::Fails(Violation {
                law: "commuting maps".into(),
                indices: vec![j],
                residual: col,
            }));
        }
    }
    unreachable!("nonzero matrix has a nonzero column");
}

// ---------------------------------------------------------------------------
// Lie algebras
// ---------------------------------------------------------------------------

/// Finite-dimensional Lie algebra over the rationals, by structure
/// constants. The Jacobi identity is verified at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    names: Vec<String>,
    /// Bracket values `[e_i, e_j]` for `i < j`, in lex order of `(i, j)`.
    brackets: Vec<Vec<Rational>>,
}

fn pair_rank(i: usize, j: usize, dim: usize) -> usize {
    // Lex rank of (i, j) with i < j among all increasing pairs of 0..dim.
    debug_assert!(i < j && j < dim);
    // Pairs starting below i: sum_{a<i} (dim-1-a).
    let before: usize = (0..i).map(|a| dim - 1 - a).sum();
    before + (j - i - 1)
}

impl LieAlgebra {
    /// Builds from sparse triples `(i, j, k, c)` meaning
    /// `[e_i, e_j] = sum_k c e_k`, with `i < j` required. Duplicate triples
    /// accumulate. The Jacobi identity is checked on all `i < j < k` and a
    /// violation is returned as an error carrying the first witness.
    pub fn from_triples(
        dim: usize,
        names: Option<Vec<String>>,
        triples: &[(usize, usize, usize, Rational)],
    ) -> Result<Self, StructureError> {
        let names = match names {
            Some(n) => {
                if n.len() != dim {
                    return Err(StructureError::DimensionMismatch(format!(
                        "{} basis names for dimension {}",
                        n.len(),
                        dim
                    )));
                }
                n
            }
            None => default_names(dim),
        };
        let npairs = dim * dim.saturating_sub(1) / 2;
        let mut brackets = vec![zero_vec(dim); npairs];
        for &(i, j, k, ref c) in triples {
            if i >= dim || j >= dim || k >= dim {
                return Err(StructureError::IndexOutOfRange(format!(
                    "triple ({i}, {j}, {k}) in dimension {dim}"
                )));
            }
            if i >= j {
                return Err(StructureError::BadTriple(i, j));
            }
            brackets[pair_rank(i, j, dim)][k] += c;
        }
        let alg = LieAlgebra {
            dim,
            names,
            brackets,
        };
        require(alg.check_jacobi())?;
        Ok(alg)
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra::from_triples(dim, None, &[]).expect("zero bracket satisfies Jacobi")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `[e_i, e_j]` for arbitrary `i, j` (antisymmetry is structural).
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Less => self.brackets[pair_rank(i, j, self.dim)].clone(),
            Ordering::Greater => {
                let mut v = self.brackets[pair_rank(j, i, self.dim)].clone();
                for e in &mut v {
                    *e = -e.clone();
                }
                v
            }
            Ordering::Equal => zero_vec(self.dim),
        }
    }

    /// Bracket of two coefficient vectors.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = zero_vec(self.dim);
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let c = &x[i] * &y[j] - &x[j] * &y[i];
                if !c.is_zero() {
                    axpy(&mut out, &c, &self.brackets[pair_rank(i, j, self.dim)]);
                }
            }
        }
        out
    }

    /// Sparse triples `(i, j, k, c)` with `i < j`, suitable for rebuilding.
    pub fn to_triples(&self) -> Vec<(usize, usize, usize, Rational)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for (k, c) in self.brackets[pair_rank(i, j, self.dim)].iter().enumerate() {
                    if !c.is_zero() {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    /// Jacobi identity on all increasing triples; first violating triple
    /// and its residual on failure.
    pub fn check_jacobi(&self) -> Verdict {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in (j + 1)..self.dim {
                    let mut acc = self.bracket(&basis_vec(self.dim, i), &self.bracket_basis(j, k));
                    let t2 = self.bracket(&basis_vec(self.dim, j), &self.bracket_basis(k, i));
                    let t3 = self.bracket(&basis_vec(self.dim, k), &self.bracket_basis(i, j));
                    for (a, (b, c)) in acc.iter_mut().zip(t2.iter().zip(t3.iter())) {
                        *a += b + c;
                    }
                    if !vec_is_zero(&acc) {
                        return Verdict::Fails(Violation {
                            law: "jacobi identity".into(),
                            indices: vec![i, j, k],
                            residual: acc,
                        });
                    }
                }
            }
        }
        Verdict::Holds
    }

    /// Leibniz rule `d[x,y] = [dx,y] + [x,dy]` on all basis pairs.
    pub fn check_derivation(&self, d: &Matrix) -> Result<Verdict, StructureError> {
        check_square(d, self.dim, "derivation candidate")?;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let lhs = d.apply(&self.bracket_basis(i, j));
                let mut rhs = self.bracket(&d.column(i), &basis_vec(self.dim, j));
                let t = self.bracket(&basis_vec(self.dim, i), &d.column(j));
                for (a, b) in rhs.iter_mut().zip(t.iter()) {
                    *a += b;
                }
                let residual: Vec<Rational> =
                    lhs.iter().zip(rhs.iter()).map(|(a, b)| a - b).collect();
                if !vec_is_zero(&residual) {
                    return Ok(Verdict::Fails(Violation {
                        law: "derivation (Leibniz rule)".into(),
                        indices: vec![i, j],
                        residual,
                    }));
                }
            }
        }
        Ok(Verdict::Holds)
    }

    /// Weighted Rota-Baxter identity
    /// `[Rx,Ry] = R([Rx,y] + [x,Ry] + w [x,y])` on all basis pairs.
    pub fn check_rota_baxter(&self, r: &Matrix, weight: &Rational) -> Result<Verdict, StructureError> {
        check_square(r, self.dim, "Rota-Baxter candidate")?;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let lhs = self.bracket(&r.column(i), &r.column(j));
                let mut inner = self.bracket(&r.column(i), &basis_vec(self.dim, j));
                let t = self.bracket(&basis_vec(self.dim, i), &r.column(j));
                for (a, b) in inner.iter_mut().zip(t.iter()) {
                    *a += b;
                }
                axpy(&mut inner, weight, &self.bracket_basis(i, j));
                let rhs = r.apply(&inner);
                let residual: Vec<Rational> =
                    lhs.iter().zip(rhs.iter()).map(|(a, b)| a - b).collect();
                if !vec_is_zero(&residual) {
                    return Ok(Verdict::Fails(Violation {
                        law: "weighted Rota-Baxter identity".into(),
                        indices: vec![i, j],
                        residual,
                    }));
                }
            }
        }
        Ok(Verdict::Holds)
    }
}

// ---------------------------------------------------------------------------
// Associative algebras
// ---------------------------------------------------------------------------

/// Finite-dimensional associative algebra by structure constants;
/// associativity is verified at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocAlgebra {
    dim: usize,
    names: Vec<String>,
    /// `mu(e_i, e_j)` at index `i * dim + j`.
    products: Vec<Vec<Rational>>,
}

impl AssocAlgebra {
    /// Builds from sparse triples `(i, j, k, c)` meaning
    /// `mu(e_i, e_j) = sum_k c e_k`; all ordered pairs allowed.
    pub fn from_triples(
        dim: usize,
        names: Option<Vec<String>>,
        triples: &[(usize, usize, usize, Rational)],
    ) -> Result<Self, StructureError> {
        let names = match names {
            Some(n) => {
                if n.len() != dim {
                    return Err(StructureError::DimensionMismatch(format!(
                        "{} basis names for dimension {}",
                        n.len(),
                        dim
                    )));
                }
                n
            }
            None => default_names(dim),
        };
        let mut products = vec![zero_vec(dim); dim * dim];
        for &(i, j, k, ref c) in triples {
            if i >= dim || j >= dim || k >= dim {
                return Err(StructureError::IndexOutOfRange(format!(
                    "triple ({i}, {j}, {k}) in dimension {dim}"
                )));
            }
            products[i * dim + j][k] += c;
        }
        let alg = AssocAlgebra {
            dim,
            names,
            products,
        };
        require(alg.check_associativity())?;
        Ok(alg)
    }

    pub fn zero_product(dim: usize) -> Self {
        AssocAlgebra::from_triples(dim, None, &[]).expect("zero product is associative")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn product_basis(&self, i: usize, j: usize) -> &[Rational] {
        &self.products[i * self.dim + j]
    }

    pub fn product(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = zero_vec(self.dim);
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                let c = &x[i] * &y[j];
                if !c.is_zero() {
                    axpy(&mut out, &c, self.product_basis(i, j));
                }
            }
        }
        out
    }

    pub fn to_triples(&self) -> Vec<(usize, usize, usize, Rational)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for (k, c) in self.product_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    /// Associativity on all ordered basis triples.
    pub fn check_associativity(&self) -> Verdict {
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let lhs = self.product(self.product_basis(i, j), &basis_vec(self.dim, k));
                    let rhs = self.product(&basis_vec(self.dim, i), self.product_basis(j, k));
                    let residual: Vec<Rational> =
                        lhs.iter().zip(rhs.iter()).map(|(a, b)| a - b).collect();
                    if !vec_is_zero(&residual) {
                        return Verdict::Fails(Violation {
                            law: "associativity".into(),
                            indices: vec![i, j, k],
                            residual,
                        });
                    }
                }
            }
        }
        Verdict::Holds
    }

    /// Leibniz rule for the product.
    pub fn check_derivation(&self, d: &Matrix) -> Result<Verdict, StructureError> {
        check_square(d, self.dim, "derivation candidate")?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let lhs = d.apply(self.product_basis(i, j));
                let mut rhs = self.product(&d.column(i), &basis_vec(self.dim, j));
                let t = self.product(&basis_vec(self.dim, i), &d.column(j));
                for (a, b) in rhs.iter_mut().zip(t.iter()) {
                    *a += b;
                }
                let residual: Vec<Rational> =
                    lhs.iter().zip(rhs.iter()).map(|(a, b)| a - b).collect();
                if !vec_is_zero(&residual) {
                    return Ok(Verdict::Fails(Violation {
                        law: "derivation (Leibniz rule)".into(),
                        indices: vec![i, j],
                        residual,
                    }));
                }
            }
        }
        Ok(Verdict::Holds)
    }

    /// Weighted Rota-Baxter identity for the product.
    pub fn check_rota_baxter(&self, r: &Matrix, weight: &Rational) -> Result<Verdict, StructureError> {
        check_square(r, self.dim, "Rota-Baxter candidate")?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let lhs = self.product(&r.column(i), &r.column(j));
                let mut inner = self.product(&r.column(i), &basis_vec(self.dim, j));
                let t = self.product(&basis_vec(self.dim, i), &r.column(j));
                for (a, b) in inner.iter_mut().zip(t.iter()) {
                    *a += b;
                }
                axpy(&mut inner, weight, self.product_basis(i, j));
                let rhs = r.apply(&inner);
                let residual: Vec<Rational> =
                    lhs.iter().zip(rhs.iter()).map(|(a, b)| a - b).collect();
                if !vec_is_zero(&residual) {
                    return Ok(Verdict::Fails(Violation {
                        law: "weighted Rota-Baxter identity".into(),
                        indices: vec![i, j],
                        residual,
                    }));
                }
            }
        }
        Ok(Verdict::Holds)
    }
}

// ---------------------------------------------------------------------------
// Representations and bimodules
// ---------------------------------------------------------------------------

/// Representation of a Lie algebra: `rho[i]` is the action of `e_i` on the
/// module. The bracket-to-commutator law is verified at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieRep {
    space_dim: usize,
    rho: Vec<Matrix>,
}

impl LieRep {
    pub fn new(alg: &LieAlgebra, rho: Vec<Matrix>) -> Result<Self, StructureError> {
        if rho.len() != alg.dim() {
            return Err(StructureError::DimensionMismatch(format!(
                "{} action matrices for algebra dimension {}",
                rho.len(),
                alg.dim()
            )));
        }
        let space_dim = if rho.is_empty() { 0 } else { rho[0].rows() };
        for (i, m) in rho.iter().enumerate() {
            check_square(m, space_dim, &format!("action matrix {i}"))?;
        }
        let rep = LieRep { space_dim, rho };
        require_rep(rep.check_rep_law(alg))?;
        Ok(rep)
    }

    /// Adjoint representation: `e_i` acts by `[e_i, -]`.
    pub fn adjoint(alg: &LieAlgebra) -> Self {
        let d = alg.dim();
        let rho = (0..d)
            .map(|i| {
                let cols: Vec<Vec<Rational>> = (0..d).map(|j| alg.bracket_basis(i, j)).collect();
                Matrix::from_columns(d, &cols).expect("square adjoint matrix")
            })
            .collect();
        LieRep { space_dim: d, rho }
    }

    pub fn zero(alg_dim: usize, space_dim: usize) -> Self {
        LieRep {
            space_dim,
            rho: vec![Matrix::zeros(space_dim, space_dim); alg_dim],
        }
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn action(&self, i: usize) -> &Matrix {
        &self.rho[i]
    }

    /// Action of an arbitrary algebra element given by coefficients.
    pub fn action_of(&self, x: &[Rational]) -> Matrix {
        let mut m = Matrix::zeros(self.space_dim, self.space_dim);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.rho[i].scale(c)).expect("same shape");
            }
        }
        m
    }

    /// `rho([e_i, e_j]) = rho_i rho_j - rho_j rho_i` on all pairs.
    pub fn check_rep_law(&self, alg: &LieAlgebra) -> Verdict {
        for i in 0..alg.dim() {
            for j in (i + 1)..alg.dim() {
                let lhs = self.action_of(&alg.bracket_basis(i, j));
                let comm = self.rho[i]
                    .mul(&self.rho[j])
                    .expect("square")
                    .sub(&self.rho[j].mul(&self.rho[i]).expect("square"))
                    .expect("same shape");
                let diff = lhs.sub(&comm).expect("same shape");
                if !diff.is_zero() {
                    let col = (0..diff.cols())
                        .find(|&c| !vec_is_zero(&diff.column(c)))
                        .expect("nonzero matrix");
                    return Verdict::Fails(Violation {
                        law: "representation law".into(),
                        indices: vec![i, j, col],
                        residual: diff.column(col),
                    });
                }
            }
        }
        Verdict::Holds
    }
}

/// Bimodule over an associative algebra: `left[i]` / `right[i]` are the
/// actions of `e_i`. The three bimodule axioms are verified at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssBimodule {
    space_dim: usize,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
}

impl AssBimodule {
    pub fn new(alg: &AssocAlgebra, left: Vec<Matrix>, right: Vec<Matrix>) -> Result<Self, StructureError> {
        if left.len() != alg.dim() || right.len() != alg.dim() {
            return Err(StructureError::DimensionMismatch(format!(
                "{} left / {} right action matrices for algebra dimension {}",
                left.len(),
                right.len(),
                alg.dim()
            )));
        }
        let space_dim = if left.is_empty() { 0 } else { left[0].rows() };
        for (i, m) in left.iter().chain(right.iter()).enumerate() {
            check_square(m, space_dim, &format!("action matrix {i}"))?;
        }
        let bimod = AssBimodule {
            space_dim,
            left,
            right,
        };
        require_rep(bimod.check_axioms(alg))?;
        Ok(bimod)
    }

    /// The algebra acting on itself by left and right multiplication.
    pub fn adjoint(alg: &AssocAlgebra) -> Self {
        let d = alg.dim();
        let left = (0..d)
            .map(|i| {
                let cols: Vec<Vec<Rational>> =
                    (0..d).map(|j| alg.product_basis(i, j).to_vec()).collect();
                Matrix::from_columns(d, &cols).expect("square")
            })
            .collect();
        let right = (0..d)
            .map(|i| {
                let cols: Vec<Vec<Rational>> =
                    (0..d).map(|j| alg.product_basis(j, i).to_vec()).collect();
                Matrix::from_columns(d, &cols).expect("square")
            })
            .collect();
        AssBimodule {
            space_dim: d,
            left,
            right,
        }
    }

    pub fn zero(alg_dim: usize, space_dim: usize) -> Self {
        AssBimodule {
            space_dim,
            left: vec![Matrix::zeros(space_dim, space_dim); alg_dim],
            right: vec![Matrix::zeros(space_dim, space_dim); alg_dim],
        }
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn left(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    pub fn right(&self, i: usize) -> &Matrix {
        &self.right[i]
    }

    pub fn left_of(&self, x: &[Rational]) -> Matrix {
        let mut m = Matrix::zeros(self.space_dim, self.space_dim);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.left[i].scale(c)).expect("same shape");
            }
        }
        m
    }

    pub fn right_of(&self, x: &[Rational]) -> Matrix {
        let mut m = Matrix::zeros(self.space_dim, self.space_dim);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.right[i].scale(c)).expect("same shape");
            }
        }
        m
    }

    /// The three bimodule axioms on all basis pairs.
    pub fn check_axioms(&self, alg: &AssocAlgebra) -> Verdict {
        let mismatch = |law: &str, i, j, diff: &Matrix| {
            let col = (0..diff.cols())
                .find(|&c| !vec_is_zero(&diff.column(c)))
                .expect("nonzero matrix");
            Verdict::Fails(Violation {
                law: law.into(),
                indices: vec![i, j, col],
                residual: diff.column(col),
            })
        };
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                // l(xy) = l(x) l(y)
                let lhs = self.left_of(alg.product_basis(i, j));
                let rhs = self.left[i].mul(&self.left[j]).expect("square");
                let diff = lhs.sub(&rhs).expect("same shape");
                if !diff.is_zero() {
                    return mismatch("bimodule left-action axiom", i, j, &diff);
                }
                // r(y) l(x) = l(x) r(y)
                let lhs = self.right[j].mul(&self.left[i]).expect("square");
                let rhs = self.left[i].mul(&self.right[j]).expect("square");
                let diff = lhs.sub(&rhs).expect("same shape");
                if !diff.is_zero() {
                    return mismatch("bimodule middle axiom", i, j, &diff);
                }
                // r(y) r(x) = r(xy)
                let lhs = self.right[j].mul(&self.right[i]).expect("square");
                let rhs = self.right_of(alg.product_basis(i, j));
                let diff = lhs.sub(&rhs).expect("same shape");
                if !diff.is_zero() {
                    return mismatch("bimodule right-action axiom", i, j, &diff);
                }
            }
        }
        Verdict::Holds
    }
}

// ---------------------------------------------------------------------------
// Pairs
// ---------------------------------------------------------------------------

/// Lie algebra with a derivation and a weighted Rota-Baxter operator that
/// commutes with it. All three laws are verified at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RbLieDerPair {
    algebra: LieAlgebra,
    delta: Matrix,
    rb: Matrix,
    weight: Rational,
}

impl RbLieDerPair {
    pub fn new(
        algebra: LieAlgebra,
        delta: Matrix,
        rb: Matrix,
        weight: Rational,
    ) -> Result<Self, StructureError> {
        require(algebra.check_derivation(&delta)?)?;
        require(algebra.check_rota_baxter(&rb, &weight)?)?;
        require(check_commute(&rb, &delta)?)?;
        Ok(RbLieDerPair {
            algebra,
            delta,
            rb,
            weight,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn delta(&self) -> &Matrix {
        &self.delta
    }

    pub fn rb(&self) -> &Matrix {
        &self.rb
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

/// Associative algebra with a derivation and a commuting weighted
/// Rota-Baxter operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RbAssDerPair {
    algebra: AssocAlgebra,
    delta: Matrix,
    rb: Matrix,
    weight: Rational,
}

impl RbAssDerPair {
    pub fn new(
        algebra: AssocAlgebra,
        delta: Matrix,
        rb: Matrix,
        weight: Rational,
    ) -> Result<Self, StructureError> {
        require(algebra.check_derivation(&delta)?)?;
        require(algebra.check_rota_baxter(&rb, &weight)?)?;
        require(check_commute(&rb, &delta)?)?;
        Ok(RbAssDerPair {
            algebra,
            delta,
            rb,
            weight,
        })
    }

    pub fn algebra(&self) -> &AssocAlgebra {
        &self.algebra
    }

    pub fn delta(&self) -> &Matrix {
        &self.delta
    }

    pub fn rb(&self) -> &Matrix {
        &self.rb
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

/// Lie algebra with two derivations whose pointwise brackets satisfy
/// `[d1 x, d2 y] = [d1 y, d2 x]`, equivalently `d1 . d2` is a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieBiDerPair {
    algebra: LieAlgebra,
    delta1: Matrix,
    delta2: Matrix,
}

impl LieBiDerPair {
    pub fn new(algebra: LieAlgebra, delta1: Matrix, delta2: Matrix) -> Result<Self, StructureError> {
        require(check_bider(&algebra, &delta1, &delta2)?)?;
        Ok(LieBiDerPair {
            algebra,
            delta1,
            delta2,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn delta1(&self) -> &Matrix {
        &self.delta1
    }

    pub fn delta2(&self) -> &Matrix {
        &self.delta2
    }
}

/// Checks the two-derivation compatibility. Both maps must already be
/// derivations (reported as a distinct error otherwise). The pairwise
/// condition and the "composite is a derivation" characterization are both
/// computed and must agree; a disagreement would be an implementation bug
/// and is reported as an internal invariant breach.
pub fn check_bider(
    alg: &LieAlgebra,
    delta1: &Matrix,
    delta2: &Matrix,
) -> Result<Verdict, StructureError> {
    require(alg.check_derivation(delta1)?)?;
    require(alg.check_derivation(delta2)?)?;
    let mut pairwise = Verdict::Holds;
    'outer: for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let lhs = alg.bracket(&delta1.column(i), &delta2.column(j));
            let rhs = alg.bracket(&delta1.column(j), &delta2.column(i));
            let residual: Vec<Rational> = lhs.iter().zip(rhs.iter()).map(|(a, b)| a - b).collect();
            if !vec_is_zero(&residual) {
                pairwise = Verdict::Fails(Violation {
                    law: "biderivation compatibility".into(),
                    indices: vec![i, j],
                    residual,
                });
                break 'outer;
            }
        }
    }
    let composite = delta1.mul(delta2).expect("square");
    let via_composite = alg.check_derivation(&composite)?;
    if pairwise.holds() != via_composite.holds() {
        return Err(StructureError::InternalInvariant(format!(
            "biderivation characterizations disagree: pairwise {}, composite {}",
            pairwise, via_composite
        )));
    }
    Ok(pairwise)
}

/// Representation datum for a [`LieBiDerPair`]:
/// `rho(d1 x) . phi2 = -rho(d2 x) . phi1` for every basis `x`.
pub fn check_bider_rep(
    pair: &LieBiDerPair,
    rep: &LieRep,
    phi1: &Matrix,
    phi2: &Matrix,
) -> Result<Verdict, StructureError> {
    check_square(phi1, rep.space_dim(), "phi1")?;
    check_square(phi2, rep.space_dim(), "phi2")?;
    for i in 0..pair.algebra.dim() {
        let lhs = rep.action_of(&pair.delta1.column(i)).mul(phi2).expect("square");
        let rhs = rep
            .action_of(&pair.delta2.column(i))
            .mul(phi1)
            .expect("square")
            .neg();
        let diff = lhs.sub(&rhs).expect("same shape");
        if !diff.is_zero() {
            let col = (0..diff.cols())
                .find(|&c| !vec_is_zero(&diff.column(c)))
                .expect("nonzero matrix");
            return Ok(Verdict::Fails(Violation {
                law: "biderivation representation compatibility".into(),
                indices: vec![i, col],
                residual: diff.column(col),
            }));
        }
    }
    Ok(Verdict::Holds)
}

/// Representation of a weighted Rota-Baxter Lie pair with derivation: a
/// representation together with a module derivation and a module operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RbLieDerRep {
    rep: LieRep,
    delta_v: Matrix,
    t: Matrix,
}

impl RbLieDerRep {
    pub fn new(
        pair: &RbLieDerPair,
        rep: LieRep,
        delta_v: Matrix,
        t: Matrix,
    ) -> Result<Self, StructureError> {
        check_square(&delta_v, rep.space_dim(), "module derivation")?;
        check_square(&t, rep.space_dim(), "module operator")?;
        let candidate = RbLieDerRep { rep, delta_v, t };
        require_rep(check_rblieder_rep(pair, &candidate))?;
        Ok(candidate)
    }

    /// The pair acting on itself; always a valid representation.
    pub fn adjoint(pair: &RbLieDerPair) -> Self {
        RbLieDerRep {
            rep: LieRep::adjoint(pair.algebra()),
            delta_v: pair.delta().clone(),
            t: pair.rb().clone(),
        }
    }

    pub fn rep(&self) -> &LieRep {
        &self.rep
    }

    pub fn delta_v(&self) -> &Matrix {
        &self.delta_v
    }

    pub fn t(&self) -> &Matrix {
        &self.t
    }

    pub fn space_dim(&self) -> usize {
        self.rep.space_dim()
    }
}

/// The four representation axioms, reporting which one failed and on which
/// basis element.
pub fn check_rblieder_rep(pair: &RbLieDerPair, rep: &RbLieDerRep) -> Verdict {
    let alg = pair.algebra();
    let law0 = rep.rep.check_rep_law(alg);
    if !law0.holds() {
        return law0;
    }
    let fail = |law: &str, i: usize, diff: &Matrix| {
        let col = (0..diff.cols())
            .find(|&c| !vec_is_zero(&diff.column(c)))
            .expect("nonzero matrix");
        Verdict::Fails(Violation {
            law: law.into(),
            indices: vec![i, col],
            residual: diff.column(col),
        })
    };
    for i in 0..alg.dim() {
        let rho_i = rep.rep.action(i);
        // delta_V rho(x) = rho(delta x) + rho(x) delta_V
        let lhs = rep.delta_v.mul(rho_i).expect("square");
        let rhs = rep
            .rep
            .action_of(&pair.delta().column(i))
            .add(&rho_i.mul(&rep.delta_v).expect("square"))
            .expect("same shape");
        let diff = lhs.sub(&rhs).expect("same shape");
        if !diff.is_zero() {
            return fail("representation derivation compatibility", i, &diff);
        }
        // rho(Rx) T = T (rho(Rx) + rho(x) T + w rho(x))
        let rho_rx = rep.rep.action_of(&pair.rb().column(i));
        let lhs = rho_rx.mul(&rep.t).expect("square");
        let inner = rho_rx
            .add(&rho_i.mul(&rep.t).expect("square"))
            .expect("same shape")
            .add(&rho_i.scale(pair.weight()))
            .expect("same shape");
        let rhs = rep.t.mul(&inner).expect("square");
        let diff = lhs.sub(&rhs).expect("same shape");
        if !diff.is_zero() {
            return fail("representation Rota-Baxter compatibility", i, &diff);
        }
    }
    // T delta_V = delta_V T
    match check_commute(&rep.t, &rep.delta_v).expect("square same size") {
        Verdict::Holds => Verdict::Holds,
        Verdict::Fails(mut v) => {
            v.law = "module operator / module derivation commuting".into();
            Verdict::Fails(v)
        }
    }
}

/// Bimodule over a weighted Rota-Baxter associative pair with derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RbAssDerRep {
    bimod: AssBimodule,
    delta_m: Matrix,
    t: Matrix,
}

impl RbAssDerRep {
    pub fn new(
        pair: &RbAssDerPair,
        bimod: AssBimodule,
        delta_m: Matrix,
        t: Matrix,
    ) -> Result<Self, StructureError> {
        check_square(&delta_m, bimod.space_dim(), "module derivation")?;
        check_square(&t, bimod.space_dim(), "module operator")?;
        let candidate = RbAssDerRep { bimod, delta_m, t };
        require_rep(check_rbassder_rep(pair, &candidate))?;
        Ok(candidate)
    }

    pub fn adjoint(pair: &RbAssDerPair) -> Self {
        RbAssDerRep {
            bimod: AssBimodule::adjoint(pair.algebra()),
            delta_m: pair.delta().clone(),
            t: pair.rb().clone(),
        }
    }

    pub fn bimod(&self) -> &AssBimodule {
        &self.bimod
    }

    pub fn delta_m(&self) -> &Matrix {
        &self.delta_m
    }

    pub fn t(&self) -> &Matrix {
        &self.t
    }

    pub fn space_dim(&self) -> usize {
        self.bimod.space_dim()
    }
}

/// The five bimodule compatibility axioms (plus the plain bimodule laws),
/// with a per-axiom failure report.
pub fn check_rbassder_rep(pair: &RbAssDerPair, rep: &RbAssDerRep) -> Verdict {
    let alg = pair.algebra();
    let base = rep.bimod.check_axioms(alg);
    if !base.holds() {
        return base;
    }
    let fail = |law: &str, i: usize, diff: &Matrix| {
        let col = (0..diff.cols())
            .find(|&c| !vec_is_zero(&diff.column(c)))
            .expect("nonzero matrix");
        Verdict::Fails(Violation {
            law: law.into(),
            indices: vec![i, col],
            residual: diff.column(col),
        })
    };
    for i in 0..alg.dim() {
        let l_i = rep.bimod.left(i);
        let r_i = rep.bimod.right(i);
        // delta_M l(x) = l(delta x) + l(x) delta_M
        let lhs = rep.delta_m.mul(l_i).expect("square");
        let rhs = rep
            .bimod
            .left_of(&pair.delta().column(i))
            .add(&l_i.mul(&rep.delta_m).expect("square"))
            .expect("same shape");
        let diff = lhs.sub(&rhs).expect("same shape");
        if !diff.is_zero() {
            return fail("bimodule left derivation compatibility", i, &diff);
        }
        // delta_M r(x) = r(x) delta_M + r(delta x)
        let lhs = rep.delta_m.mul(r_i).expect("square");
        let rhs = r_i
            .mul(&rep.delta_m)
            .expect("square")
            .add(&rep.bimod.right_of(&pair.delta().column(i)))
            .expect("same shape");
        let diff = lhs.sub(&rhs).expect("same shape");
        if !diff.is_zero() {
            return fail("bimodule right derivation compatibility", i, &diff);
        }
        // l(Rx) T = T (l(Rx) + l(x) T + w l(x))
        let l_rx = rep.bimod.left_of(&pair.rb().column(i));
        let lhs = l_rx.mul(&rep.t).expect("square");
        let inner = l_rx
            .add(&l_i.mul(&rep.t).expect("square"))
            .expect("same shape")
            .add(&l_i.scale(pair.weight()))
            .expect("same shape");
        let rhs = rep.t.mul(&inner).expect("square");
        let diff = lhs.sub(&rhs).expect("same shape");
        if !diff.is_zero() {
            return fail("bimodule left Rota-Baxter compatibility", i, &diff);
        }
        // r(Rx) T = T (r(x) T + r(Rx) + w r(x))
        let r_rx = rep.bimod.right_of(&pair.rb().column(i));
        let lhs = r_rx.mul(&rep.t).expect("square");
        let inner = r_i
            .mul(&rep.t)
            .expect("square")
            .add(&r_rx)
            .expect("same shape")
            .add(&r_i.scale(pair.weight()))
            .expect("same shape");
        let rhs = rep.t.mul(&inner).expect("square");
        let diff = lhs.sub(&rhs).expect("same shape");
        if !diff.is_zero() {
            return fail("bimodule right Rota-Baxter compatibility", i, &diff);
        }
    }
    match check_commute(&rep.t, &rep.delta_m).expect("square same size") {
        Verdict::Holds => Verdict::Holds,
        Verdict::Fails(mut v) => {
            v.law = "module operator / module derivation commuting".into();
            Verdict::Fails(v)
        }
    }
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.rows() + b.rows();
    let mut m = Matrix::zeros(n, n);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            m.set(a.rows() + i, a.cols() + j, b.get(i, j).clone());
        }
    }
    m
}

fn semidirect_names(alg_names: &[String], space_dim: usize) -> Vec<String> {
    let mut names = alg_names.to_vec();
    names.extend((1..=space_dim).map(|i| format!("v{i}")));
    names
}

/// Semidirect Lie bracket on `L (+) V`:
/// `[x + a, y + b] = [x, y] + rho(x) b - rho(y) a`.
fn semidirect_lie_algebra(alg: &LieAlgebra, rep: &LieRep) -> Result<LieAlgebra, StructureError> {
    let d = alg.dim();
    let m = rep.space_dim();
    let mut triples = Vec::new();
    for (i, j, k, c) in alg.to_triples() {
        triples.push((i, j, k, c));
    }
    for i in 0..d {
        for b in 0..m {
            // [e_i, v_b] = rho(e_i) v_b
            let col = rep.action(i).column(b);
            for (k, c) in col.iter().enumerate() {
                if !c.is_zero() {
                    triples.push((i, d + b, d + k, c.clone()));
                }
            }
        }
    }
    LieAlgebra::from_triples(d + m, Some(semidirect_names(alg.names(), m)), &triples)
}

/// Semidirect product of a Lie-BiDer pair by a compatible representation.
pub fn semidirect_bider(
    pair: &LieBiDerPair,
    rep: &LieRep,
    phi1: &Matrix,
    phi2: &Matrix,
) -> Result<LieBiDerPair, StructureError> {
    require_rep(rep.check_rep_law(pair.algebra()))?;
    require_rep(check_bider_rep(pair, rep, phi1, phi2)?)?;
    let big = semidirect_lie_algebra(pair.algebra(), rep)?;
    LieBiDerPair::new(
        big,
        block_diag(pair.delta1(), phi1),
        block_diag(pair.delta2(), phi2),
    )
}

/// Semidirect product of a weighted Rota-Baxter Lie pair by a
/// representation; the maps extend block-diagonally and the weight is kept.
pub fn semidirect_rblieder(
    pair: &RbLieDerPair,
    rep: &RbLieDerRep,
) -> Result<RbLieDerPair, StructureError> {
    require_rep(check_rblieder_rep(pair, rep))?;
    let big = semidirect_lie_algebra(pair.algebra(), rep.rep())?;
    RbLieDerPair::new(
        big,
        block_diag(pair.delta(), rep.delta_v()),
        block_diag(pair.rb(), rep.t()),
        pair.weight().clone(),
    )
}

/// Semidirect product on the associative side:
/// `mu(x + m, y + n) = mu(x, y) + x n + m y`.
pub fn semidirect_rbassder(
    pair: &RbAssDerPair,
    rep: &RbAssDerRep,
) -> Result<RbAssDerPair, StructureError> {
    require_rep(check_rbassder_rep(pair, rep))?;
    let alg = pair.algebra();
    let d = alg.dim();
    let m = rep.space_dim();
    let mut triples = alg.to_triples();
    for i in 0..d {
        for b in 0..m {
            // mu(e_i, v_b) = l(e_i) v_b
            for (k, c) in rep.bimod().left(i).column(b).iter().enumerate() {
                if !c.is_zero() {
                    triples.push((i, d + b, d + k, c.clone()));
                }
            }
            // mu(v_b, e_i) = r(e_i) v_b
            for (k, c) in rep.bimod().right(i).column(b).iter().enumerate() {
                if !c.is_zero() {
                    triples.push((d + b, i, d + k, c.clone()));
                }
            }
        }
    }
    let big = AssocAlgebra::from_triples(d + m, Some(semidirect_names(alg.names(), m)), &triples)?;
    RbAssDerPair::new(
        big,
        block_diag(pair.delta(), rep.delta_m()),
        block_diag(pair.rb(), rep.t()),
        pair.weight().clone(),
    )
}

/// The descendant bracket `[x,y]_R = [Rx,y] + [x,Ry] + w [x,y]` with the
/// same derivation, operator and weight.
pub fn induced_bracket(pair: &RbLieDerPair) -> Result<RbLieDerPair, StructureError> {
    let alg = pair.algebra();
    let d = alg.dim();
    let mut triples = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            let mut v = alg.bracket(&pair.rb().column(i), &basis_vec(d, j));
            let t = alg.bracket(&basis_vec(d, i), &pair.rb().column(j));
            for (a, b) in v.iter_mut().zip(t.iter()) {
                *a += b;
            }
            axpy(&mut v, pair.weight(), &alg.bracket_basis(i, j));
            for (k, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    triples.push((i, j, k, c.clone()));
                }
            }
        }
    }
    let twisted = LieAlgebra::from_triples(d, Some(alg.names().to_vec()), &triples)?;
    RbLieDerPair::new(
        twisted,
        pair.delta().clone(),
        pair.rb().clone(),
        pair.weight().clone(),
    )
}

/// The descendant product `mu_R(x,y) = mu(Rx,y) + mu(x,Ry) + w mu(x,y)`.
pub fn induced_product(pair: &RbAssDerPair) -> Result<RbAssDerPair, StructureError> {
    let alg = pair.algebra();
    let d = alg.dim();
    let mut triples = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let mut v = alg.product(&pair.rb().column(i), &basis_vec(d, j));
            let t = alg.product(&basis_vec(d, i), &pair.rb().column(j));
            for (a, b) in v.iter_mut().zip(t.iter()) {
                *a += b;
            }
            axpy(&mut v, pair.weight(), alg.product_basis(i, j));
            for (k, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    triples.push((i, j, k, c.clone()));
                }
            }
        }
    }
    let twisted = AssocAlgebra::from_triples(d, Some(alg.names().to_vec()), &triples)?;
    RbAssDerPair::new(
        twisted,
        pair.delta().clone(),
        pair.rb().clone(),
        pair.weight().clone(),
    )
}

/// The twisted action `rho~(x) = rho(Rx) - T rho(x)`, a representation of
/// the descendant pair [`induced_bracket`].
pub fn induced_rep(pair: &RbLieDerPair, rep: &RbLieDerRep) -> Result<RbLieDerRep, StructureError> {
    require_rep(check_rblieder_rep(pair, rep))?;
    let twisted_pair = induced_bracket(pair)?;
    let rho = (0..pair.dim())
        .map(|i| {
            rep.rep()
                .action_of(&pair.rb().column(i))
                .sub(&rep.t().mul(rep.rep().action(i)).expect("square"))
                .expect("same shape")
        })
        .collect::<Vec<_>>();
    let twisted = LieRep {
        space_dim: rep.space_dim(),
        rho,
    };
    RbLieDerRep::new(&twisted_pair, twisted, rep.delta_v().clone(), rep.t().clone())
}

/// Twisted bimodule actions `l_R(x) = l(Rx) - T l(x)`,
/// `r_R(x) = r(Rx) - T r(x)` over the descendant product.
pub fn induced_actions(
    pair: &RbAssDerPair,
    rep: &RbAssDerRep,
) -> Result<RbAssDerRep, StructureError> {
    require_rep(check_rbassder_rep(pair, rep))?;
    let twisted_pair = induced_product(pair)?;
    let left = (0..pair.dim())
        .map(|i| {
            rep.bimod()
                .left_of(&pair.rb().column(i))
                .sub(&rep.t().mul(rep.bimod().left(i)).expect("square"))
                .expect("same shape")
        })
        .collect::<Vec<_>>();
    let right = (0..pair.dim())
        .map(|i| {
            rep.bimod()
                .right_of(&pair.rb().column(i))
                .sub(&rep.t().mul(rep.bimod().right(i)).expect("square"))
                .expect("same shape")
        })
        .collect::<Vec<_>>();
    let twisted = AssBimodule {
        space_dim: rep.space_dim(),
        left,
        right,
    };
    RbAssDerRep::new(&twisted_pair, twisted, rep.delta_m().clone(), rep.t().clone())
}

/// Commutator Lie algebra `[x,y] = mu(x,y) - mu(y,x)` with the same
/// derivation, operator and weight.
pub fn skew_symmetrize_algebra(pair: &RbAssDerPair) -> Result<RbLieDerPair, StructureError> {
    let alg = pair.algebra();
    let d = alg.dim();
    let mut triples = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            let fwd = alg.product_basis(i, j);
            let bwd = alg.product_basis(j, i);
            for k in 0..d {
                let c = &fwd[k] - &bwd[k];
                if !c.is_zero() {
                    triples.push((i, j, k, c));
                }
            }
        }
    }
    let lie = LieAlgebra::from_triples(d, Some(alg.names().to_vec()), &triples)?;
    RbLieDerPair::new(
        lie,
        pair.delta().clone(),
        pair.rb().clone(),
        pair.weight().clone(),
    )
}

/// Commutator action `rho(x) m = l(x, m) - r(m, x)` over the
/// skew-symmetrized pair.
pub fn skew_symmetrize_bimodule(
    pair: &RbAssDerPair,
    rep: &RbAssDerRep,
) -> Result<RbLieDerRep, StructureError> {
    require_rep(check_rbassder_rep(pair, rep))?;
    let lie_pair = skew_symmetrize_algebra(pair)?;
    let rho = (0..pair.dim())
        .map(|i| {
            rep.bimod()
                .left(i)
                .sub(rep.bimod().right(i))
                .expect("same shape")
        })
        .collect::<Vec<_>>();
    let lie_rep = LieRep {
        space_dim: rep.space_dim(),
        rho,
    };
    RbLieDerRep::new(&lie_pair, lie_rep, rep.delta_m().clone(), rep.t().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frac, rat};

    pub(crate) fn b2() -> LieAlgebra {
        // [e1, e2] = e2
        LieAlgebra::from_triples(2, None, &[(0, 1, 1, rat(1))]).unwrap()
    }

    fn sl2() -> LieAlgebra {
        // Basis h, e, f: [h,e] = 2e, [h,f] = -2f, [e,f] = h.
        LieAlgebra::from_triples(
            3,
            Some(vec!["h".into(), "e".into(), "f".into()]),
            &[
                (0, 1, 1, rat(2)),
                (0, 2, 2, rat(-2)),
                (1, 2, 0, rat(1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn jacobi_holds_on_b2_and_sl2() {
        assert!(b2().check_jacobi().holds());
        assert!(sl2().check_jacobi().holds());
    }

    #[test]
    fn any_dim2_bracket_satisfies_jacobi() {
        // Jacobi is vacuous in dimension two.
        let alg = LieAlgebra::from_triples(2, None, &[(0, 1, 0, rat(3)), (0, 1, 1, frac(-5, 2))]);
        assert!(alg.is_ok());
    }

    #[test]
    fn jacobi_failure_witness() {
        // [e1,e2]=e3, [e1,e3]=e3, [e2,e3]=e2 violates Jacobi with
        // residual e3 - e2 on the triple (e1,e2,e3).
        let err = LieAlgebra::from_triples(
            3,
            None,
            &[(0, 1, 2, rat(1)), (0, 2, 2, rat(1)), (1, 2, 1, rat(1))],
        )
        .unwrap_err();
        match err {
            StructureError::AxiomFailed(v) => {
                assert_eq!(v.indices, vec![0, 1, 2]);
                assert_eq!(v.residual, vec![rat(0), rat(-1), rat(1)]);
            }
            other => panic!("expected axiom failure, got {other:?}"),
        }
    }

    #[test]
    fn associativity_examples() {
        // One-dimensional idempotent algebra.
        let a = AssocAlgebra::from_triples(1, None, &[(0, 0, 0, rat(1))]);
        assert!(a.is_ok());
        // e1 e1 = e2, e2 e1 = e1 breaks associativity on (e1,e1,e1).
        let err =
            AssocAlgebra::from_triples(2, None, &[(0, 0, 1, rat(1)), (1, 0, 0, rat(1))])
                .unwrap_err();
        match err {
            StructureError::AxiomFailed(v) => assert_eq!(v.indices, vec![0, 0, 0]),
            other => panic!("expected axiom failure, got {other:?}"),
        }
    }

    #[test]
    fn matrix_algebra_is_associative() {
        assert!(crate::corpus::mat2_algebra().check_associativity().holds());
    }

    #[test]
    fn derivation_checks_on_b2() {
        let alg = b2();
        // delta e1 = 0, delta e2 = e2 is a derivation.
        let d = Matrix::from_int_rows(&[&[0, 0], &[0, 1]]);
        assert!(alg.check_derivation(&d).unwrap().holds());
        // The zero map always is.
        assert!(alg.check_derivation(&Matrix::zeros(2, 2)).unwrap().holds());
        // The identity is not a derivation of a nonabelian bracket.
        let v = alg.check_derivation(&Matrix::identity(2)).unwrap();
        assert!(!v.holds());
        assert_eq!(v.violation().unwrap().residual, vec![rat(0), rat(-1)]);
    }

    #[test]
    fn rota_baxter_checks() {
        let alg = b2();
        // R = 0 at any weight.
        assert!(alg
            .check_rota_baxter(&Matrix::zeros(2, 2), &rat(7))
            .unwrap()
            .holds());
        // R = -w id at weight w.
        let r = Matrix::identity(2).scale(&rat(-3));
        assert!(alg.check_rota_baxter(&r, &rat(3)).unwrap().holds());
        // R = diag(0, b) at weight 1 works exactly for b in {0, -1};
        // the residual on (e1, e2) is b(b+1) e2.
        for b in [-3i64, -2, -1, 0, 1, 2, 5] {
            let r = Matrix::from_int_rows(&[&[0, 0], &[0, b]]);
            let verdict = alg.check_rota_baxter(&r, &rat(1)).unwrap();
            let expected = b == 0 || b == -1;
            assert_eq!(verdict.holds(), expected, "b = {b}");
            if !expected {
                let v = verdict.violation().unwrap();
                assert_eq!(v.indices, vec![0, 1]);
                assert_eq!(v.residual, vec![rat(0), rat(-b * (b + 1))]);
            }
        }
    }

    #[test]
    fn commuting_checks() {
        let f = Matrix::from_int_rows(&[&[0, 0], &[0, 1]]);
        let g = Matrix::from_int_rows(&[&[0, 0], &[0, -1]]);
        assert!(check_commute(&f, &g).unwrap().holds());
        assert!(check_commute(&f, &Matrix::identity(2)).unwrap().holds());
        let a = Matrix::from_int_rows(&[&[0, 1], &[0, 0]]);
        let b = Matrix::from_int_rows(&[&[0, 0], &[1, 0]]);
        assert!(!check_commute(&a, &b).unwrap().holds());
        assert!(check_commute(&a, &Matrix::identity(3)).is_err());
    }

    #[test]
    fn bider_on_b2_for_all_parameters() {
        // Images of both maps live in span(e2), which brackets to zero, so
        // the compatibility holds for every (a, b, c, d).
        let alg = b2();
        let d1 = Matrix::from_int_rows(&[&[0, 0], &[1, 2]]);
        let d2 = Matrix::from_int_rows(&[&[0, 0], &[3, 4]]);
        assert!(check_bider(&alg, &d1, &d2).unwrap().holds());
        // ad = bc is not required: (1,2,3,4) has ad = 4, bc = 6.
        assert!(LieBiDerPair::new(alg, d1, d2).is_ok());
    }

    #[test]
    fn bider_zero_maps() {
        let alg = b2();
        let z = Matrix::zeros(2, 2);
        assert!(check_bider(&alg, &z, &z).unwrap().holds());
    }

    #[test]
    fn bider_characterizations_agree_on_sl2() {
        // d1 = ad_e, d2 = ad_f: both derivations; the compatibility fails
        // and must agree with the composite-derivation characterization
        // (check_bider errors out if they ever disagreed).
        let alg = sl2();
        let rep = LieRep::adjoint(&alg);
        let ad_e = rep.action(1).clone();
        let ad_f = rep.action(2).clone();
        let verdict = check_bider(&alg, &ad_e, &ad_f).unwrap();
        assert!(!verdict.holds());
    }

    #[test]
    fn bider_rep_adjoint() {
        let alg = b2();
        let d1 = Matrix::from_int_rows(&[&[0, 0], &[1, 2]]);
        let d2 = Matrix::from_int_rows(&[&[0, 0], &[3, 4]]);
        let pair = LieBiDerPair::new(alg.clone(), d1.clone(), d2.clone()).unwrap();
        let rep = LieRep::adjoint(&alg);
        assert!(check_bider_rep(&pair, &rep, &d1, &d2).unwrap().holds());
        let z = Matrix::zeros(2, 2);
        assert!(check_bider_rep(&pair, &rep, &z, &z).unwrap().holds());
    }

    #[test]
    fn rblieder_pair_and_adjoint_rep() {
        let alg = b2();
        let delta = Matrix::from_int_rows(&[&[0, 0], &[0, 1]]);
        let r = Matrix::from_int_rows(&[&[0, 0], &[0, -1]]);
        let pair = RbLieDerPair::new(alg, delta, r, rat(1)).unwrap();
        let rep = RbLieDerRep::adjoint(&pair);
        assert!(check_rblieder_rep(&pair, &rep).holds());
    }

    #[test]
    fn zero_rep_is_valid() {
        let alg = b2();
        let pair = RbLieDerPair::new(alg, Matrix::zeros(2, 2), Matrix::zeros(2, 2), rat(0)).unwrap();
        let rep = RbLieDerRep::new(
            &pair,
            LieRep::zero(2, 3),
            Matrix::zeros(3, 3),
            Matrix::zeros(3, 3),
        );
        assert!(rep.is_ok());
    }

    #[test]
    fn scaled_rep_property() {
        // If (V, delta_V, T) represents (L, delta, R) at weight w, then
        // (V, delta_V, mu T) represents (L, delta, mu R) at weight mu w.
        let alg = b2();
        let delta = Matrix::from_int_rows(&[&[0, 0], &[0, 1]]);
        let r = Matrix::from_int_rows(&[&[0, 0], &[0, -1]]);
        let pair = RbLieDerPair::new(alg.clone(), delta.clone(), r.clone(), rat(1)).unwrap();
        let rep = RbLieDerRep::adjoint(&pair);

        let mu = rat(2);
        let scaled_pair =
            RbLieDerPair::new(alg, delta.clone(), r.scale(&mu), &mu * rat(1)).unwrap();
        let scaled = RbLieDerRep::new(
            &scaled_pair,
            rep.rep().clone(),
            rep.delta_v().clone(),
            rep.t().scale(&mu),
        );
        assert!(scaled.is_ok());
    }

    #[test]
    fn reflected_rep_property() {
        // (V, delta_V, -w id - T) represents (L, delta, -w id - R) at the
        // same weight.
        let alg = b2();
        let delta = Matrix::from_int_rows(&[&[0, 0], &[0, 1]]);
        let r = Matrix::from_int_rows(&[&[0, 0], &[0, -1]]);
        let w = rat(1);
        let pair = RbLieDerPair::new(alg.clone(), delta.clone(), r.clone(), w.clone()).unwrap();
        let rep = RbLieDerRep::adjoint(&pair);

        let reflect = |m: &Matrix| {
            Matrix::identity(2)
                .scale(&-w.clone())
                .sub(m)
                .expect("same shape")
        };
        let rpair = RbLieDerPair::new(alg, delta, reflect(&r), w.clone()).unwrap();
        let rrep = RbLieDerRep::new(
            &rpair,
            rep.rep().clone(),
            rep.delta_v().clone(),
            reflect(rep.t()),
        );
        assert!(rrep.is_ok());
    }

    #[test]
    fn rbassder_examples() {
        // 1-dim idempotent with R = -id, T = -id at weight 1.
        let alg = AssocAlgebra::from_triples(1, None, &[(0, 0, 0, rat(1))]).unwrap();
        let pair = RbAssDerPair::new(
            alg,
            Matrix::zeros(1, 1),
            Matrix::identity(1).scale(&rat(-1)),
            rat(1),
        )
        .unwrap();
        let adj = RbAssDerRep::adjoint(&pair);
        assert!(check_rbassder_rep(&pair, &adj).holds());
        let zero = RbAssDerRep::new(
            &pair,
            AssBimodule::zero(1, 2),
            Matrix::zeros(2, 2),
            Matrix::zeros(2, 2),
        );
        assert!(zero.is_ok());
    }

    #[test]
    fn semidirect_bider_builds_and_passes() {
        let alg = b2();
        let d1 = Matrix::from_int_rows(&[&[0, 0], &[1, 2]]);
        let d2 = Matrix::from_int_rows(&[&[0, 0], &[3, 4]]);
        let pair = LieBiDerPair::new(alg.clone(), d1.clone(), d2.clone()).unwrap();
        let rep = LieRep::adjoint(&alg);
        let big = semidirect_bider(&pair, &rep, &d1, &d2).unwrap();
        assert_eq!(big.algebra().dim(), 4);
        assert!(check_bider(big.algebra(), big.delta1(), big.delta2())
            .unwrap()
            .holds());
    }

    #[test]
    fn semidirect_rblieder_builds_and_passes() {
        let alg = b2();
        let delta = Matrix::from_int_rows(&[&[0, 0], &[0, 1]]);
        let r = Matrix::identity(2).scale(&rat(-1));
        let pair = RbLieDerPair::new(alg, delta, r, rat(1)).unwrap();
        let rep = RbLieDerRep::adjoint(&pair);
        let big = semidirect_rblieder(&pair, &rep).unwrap();
        assert_eq!(big.dim(), 4);

        // rho = 0, delta_V = 0, T = -w id_V is also a representation.
        let t = Matrix::identity(3).scale(&rat(-1));
        let rep2 = RbLieDerRep::new(&pair, LieRep::zero(2, 3), Matrix::zeros(3, 3), t).unwrap();
        let big2 = semidirect_rblieder(&pair, &rep2).unwrap();
        assert_eq!(big2.dim(), 5);
    }

    #[test]
    fn semidirect_rbassder_builds_and_passes() {
        let alg = AssocAlgebra::from_triples(
            2,
            None,
            &[(0, 0, 0, rat(1)), (0, 1, 1, rat(1))],
        )
        .unwrap();
        let delta = Matrix::from_int_rows(&[&[0, 0], &[0, 1]]);
        let r = Matrix::from_int_rows(&[&[0, 0], &[0, -1]]);
        let pair = RbAssDerPair::new(alg, delta, r, rat(1)).unwrap();
        let rep = RbAssDerRep::adjoint(&pair);
        let big = semidirect_rbassder(&pair, &rep).unwrap();
        assert_eq!(big.dim(), 4);
    }

    #[test]
    fn induced_bracket_on_b2() {
        // R = diag(0, -1) at weight 1 makes the descendant bracket abelian:
        // [e1,e2]_R = [0,e2] + [e1,-e2] + [e1,e2] = 0.
        let alg = b2();
        let delta = Matrix::from_int_rows(&[&[0, 0], &[0, 1]]);
        let r = Matrix::from_int_rows(&[&[0, 0], &[0, -1]]);
        let pair = RbLieDerPair::new(alg, delta, r, rat(1)).unwrap();
        let twisted = induced_bracket(&pair).unwrap();
        assert!(vec_is_zero(&twisted.algebra().bracket_basis(0, 1)));
        // Morphism property: R [x,y]_R = [Rx, Ry].
        for i in 0..2 {
            for j in 0..2 {
                let lhs = pair.rb().apply(&twisted.algebra().bracket_basis(i, j));
                let rhs = pair
                    .algebra()
                    .bracket(&pair.rb().column(i), &pair.rb().column(j));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn induced_bracket_degenerate_weights() {
        // R = 0 gives w [x,y]; at w = 0 that is the abelian bracket.
        let alg = b2();
        let pair =
            RbLieDerPair::new(alg, Matrix::zeros(2, 2), Matrix::zeros(2, 2), rat(0)).unwrap();
        let twisted = induced_bracket(&pair).unwrap();
        assert!(vec_is_zero(&twisted.algebra().bracket_basis(0, 1)));
        // R = -w id gives -w [x,y].
        let alg = b2();
        let pair = RbLieDerPair::new(
            alg,
            Matrix::zeros(2, 2),
            Matrix::identity(2).scale(&rat(-2)),
            rat(2),
        )
        .unwrap();
        let twisted = induced_bracket(&pair).unwrap();
        assert_eq!(
            twisted.algebra().bracket_basis(0, 1),
            vec![rat(0), rat(-2)]
        );
    }

    #[test]
    fn induced_rep_on_b2() {
        // Adjoint with R = diag(0,-1), w = 1: the twisted action is
        // rho~(e1) = diag(0, 1), rho~(e2) = 0.
        let alg = b2();
        let delta = Matrix::from_int_rows(&[&[0, 0], &[0, 1]]);
        let r = Matrix::from_int_rows(&[&[0, 0], &[0, -1]]);
        let pair = RbLieDerPair::new(alg, delta, r, rat(1)).unwrap();
        let rep = RbLieDerRep::adjoint(&pair);
        let twisted = induced_rep(&pair, &rep).unwrap();
        assert_eq!(
            twisted.rep().action(0),
            &Matrix::from_int_rows(&[&[0, 0], &[0, 1]])
        );
        assert!(twisted.rep().action(1).is_zero());
    }

    #[test]
    fn induced_rep_zero_case() {
        let alg = b2();
        let pair =
            RbLieDerPair::new(alg, Matrix::zeros(2, 2), Matrix::zeros(2, 2), rat(0)).unwrap();
        let rep = RbLieDerRep::adjoint(&pair);
        let twisted = induced_rep(&pair, &rep).unwrap();
        assert!(twisted.rep().action(0).is_zero());
        assert!(twisted.rep().action(1).is_zero());
    }

    #[test]
    fn skew_symmetrization_of_dim2_algebra() {
        // e1 e1 = e1, e1 e2 = e2 skew-symmetrizes to [e1,e2] = e2.
        let alg = AssocAlgebra::from_triples(
            2,
            None,
            &[(0, 0, 0, rat(1)), (0, 1, 1, rat(1))],
        )
        .unwrap();
        let pair = RbAssDerPair::new(alg, Matrix::zeros(2, 2), Matrix::zeros(2, 2), rat(0)).unwrap();
        let lie = skew_symmetrize_algebra(&pair).unwrap();
        assert_eq!(lie.algebra().bracket_basis(0, 1), vec![rat(0), rat(1)]);
    }

    #[test]
    fn skew_symmetrization_of_matrix_algebra() {
        // Basis E11, E12, E21, E22: [E11, E12] = E12, [E12, E21] = E11 - E22.
        let pair = RbAssDerPair::new(
            crate::corpus::mat2_algebra(),
            Matrix::zeros(4, 4),
            Matrix::zeros(4, 4),
            rat(0),
        )
        .unwrap();
        let lie = skew_symmetrize_algebra(&pair).unwrap();
        assert_eq!(
            lie.algebra().bracket_basis(0, 1),
            vec![rat(0), rat(1), rat(0), rat(0)]
        );
        assert_eq!(
            lie.algebra().bracket_basis(1, 2),
            vec![rat(1), rat(0), rat(0), rat(-1)]
        );
        assert_eq!(
            lie.algebra().bracket_basis(0, 3),
            vec![rat(0), rat(0), rat(0), rat(0)]
        );
    }

    #[test]
    fn skew_bimodule_matches_adjoint() {
        // Skew-symmetrizing the adjoint bimodule gives the adjoint action of
        // the commutator algebra.
        let alg = AssocAlgebra::from_triples(
            2,
            None,
            &[(0, 0, 0, rat(1)), (0, 1, 1, rat(1))],
        )
        .unwrap();
        let pair = RbAssDerPair::new(alg, Matrix::zeros(2, 2), Matrix::zeros(2, 2), rat(0)).unwrap();
        let rep = RbAssDerRep::adjoint(&pair);
        let lie_rep = skew_symmetrize_bimodule(&pair, &rep).unwrap();
        let lie_pair = skew_symmetrize_algebra(&pair).unwrap();
        let adj = LieRep::adjoint(lie_pair.algebra());
        for i in 0..2 {
            assert_eq!(lie_rep.rep().action(i), adj.action(i));
        }
    }

    #[test]
    fn commutative_algebra_skews_to_abelian() {
        let alg = AssocAlgebra::from_triples(
            2,
            None,
            &[(0, 0, 0, rat(1)), (0, 1, 1, rat(1)), (1, 0, 1, rat(1))],
        )
        .unwrap();
        let pair = RbAssDerPair::new(alg, Matrix::zeros(2, 2), Matrix::zeros(2, 2), rat(0)).unwrap();
        let lie = skew_symmetrize_algebra(&pair).unwrap();
        assert!(vec_is_zero(&lie.algebra().bracket_basis(0, 1)));
    }
}
