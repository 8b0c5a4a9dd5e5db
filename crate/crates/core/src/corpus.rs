//! Bundled example algebras and pairs used by the test suites and shipped
//! as JSON documents by the CLI.
//!
//! Every entry carries its adjoint representation, which is what the
//! deformation theory works over.

use crate::linalg::{rat, Matrix, Rational};
use crate::structures::{
    AssocAlgebra, LieAlgebra, RbAssDerPair, RbAssDerRep, RbLieDerPair, RbLieDerRep,
};

/// Two-dimensional nonabelian Lie algebra, `[e1, e2] = e2`.
pub fn b2_algebra() -> LieAlgebra {
    LieAlgebra::from_triples(2, None, &[(0, 1, 1, rat(1))]).expect("b2 is a Lie algebra")
}

/// `sl2` in the basis `h, e, f`: `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
pub fn sl2_algebra() -> LieAlgebra {
    LieAlgebra::from_triples(
        3,
        Some(vec!["h".into(), "e".into(), "f".into()]),
        &[(0, 1, 1, rat(2)), (0, 2, 2, rat(-2)), (1, 2, 0, rat(1))],
    )
    .expect("sl2 is a Lie algebra")
}

/// One-dimensional idempotent associative algebra, `e1 e1 = e1`.
pub fn idem1_algebra() -> AssocAlgebra {
    AssocAlgebra::from_triples(1, None, &[(0, 0, 0, rat(1))]).expect("idempotent line")
}

/// Two-dimensional associative algebra `e1 e1 = e1`, `e1 e2 = e2`; its
/// commutator algebra is `b2`.
pub fn a2_algebra() -> AssocAlgebra {
    AssocAlgebra::from_triples(2, None, &[(0, 0, 0, rat(1)), (0, 1, 1, rat(1))])
        .expect("a2 is associative")
}

/// Full 2x2 matrix algebra in the basis `E11, E12, E21, E22`.
pub fn mat2_algebra() -> AssocAlgebra {
    let names = vec!["E11".into(), "E12".into(), "E21".into(), "E22".into()];
    // E_{ab} E_{cd} = [b == c] E_{ad}, with index (a,b) -> 2a + b.
    let mut triples = Vec::new();
    for a in 0..2usize {
        for b in 0..2usize {
            for c in 0..2usize {
                for d in 0..2usize {
                    if b == c {
                        triples.push((2 * a + b, 2 * c + d, 2 * a + d, rat(1)));
                    }
                }
            }
        }
    }
    AssocAlgebra::from_triples(4, Some(names), &triples).expect("matrix units are associative")
}

/// A named weighted Rota-Baxter Lie pair with derivation, plus its adjoint
/// representation.
pub struct LieEntry {
    pub name: &'static str,
    pub pair: RbLieDerPair,
    pub rep: RbLieDerRep,
}

/// A named associative entry with its adjoint bimodule.
pub struct AssEntry {
    pub name: &'static str,
    pub pair: RbAssDerPair,
    pub rep: RbAssDerRep,
}

fn lie_entry(name: &'static str, alg: LieAlgebra, delta: Matrix, rb: Matrix, w: Rational) -> LieEntry {
    let pair = RbLieDerPair::new(alg, delta, rb, w).expect("corpus pair must validate");
    let rep = RbLieDerRep::adjoint(&pair);
    LieEntry { name, pair, rep }
}

fn ass_entry(name: &'static str, alg: AssocAlgebra, delta: Matrix, rb: Matrix, w: Rational) -> AssEntry {
    let pair = RbAssDerPair::new(alg, delta, rb, w).expect("corpus pair must validate");
    let rep = RbAssDerRep::adjoint(&pair);
    AssEntry { name, pair, rep }
}

/// The Lie-side corpus.
pub fn lie_corpus() -> Vec<LieEntry> {
    let mut entries = Vec::new();
    entries.push(lie_entry(
        "b2-zero",
        b2_algebra(),
        Matrix::zeros(2, 2),
        Matrix::zeros(2, 2),
        rat(0),
    ));
    entries.push(lie_entry(
        "b2-neg-id",
        b2_algebra(),
        Matrix::from_int_rows(&[&[0, 0], &[0, 1]]),
        Matrix::identity(2).scale(&rat(-1)),
        rat(1),
    ));
    entries.push(lie_entry(
        "b2-diag",
        b2_algebra(),
        Matrix::from_int_rows(&[&[0, 0], &[0, 1]]),
        Matrix::from_int_rows(&[&[0, 0], &[0, -1]]),
        rat(1),
    ));
    entries.push(lie_entry(
        "sl2-zero",
        sl2_algebra(),
        Matrix::zeros(3, 3),
        Matrix::zeros(3, 3),
        rat(0),
    ));
    entries.push(lie_entry(
        "sl2-split",
        sl2_algebra(),
        Matrix::zeros(3, 3),
        // Projection-type operator: kills h and e, sends f to -f.
        Matrix::from_int_rows(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, -1]]),
        rat(1),
    ));
    entries.push(lie_entry(
        "abelian2-zero",
        LieAlgebra::abelian(2),
        Matrix::zeros(2, 2),
        Matrix::zeros(2, 2),
        rat(0),
    ));
    entries.push(lie_entry(
        "abelian2-maps",
        LieAlgebra::abelian(2),
        Matrix::from_int_rows(&[&[1, 0], &[0, 2]]),
        Matrix::from_int_rows(&[&[3, 0], &[0, 4]]),
        rat(5),
    ));
    entries
}

/// The associative-side corpus.
pub fn ass_corpus() -> Vec<AssEntry> {
    let mut entries = Vec::new();
    entries.push(ass_entry(
        "idem1-neg-id",
        idem1_algebra(),
        Matrix::zeros(1, 1),
        Matrix::identity(1).scale(&rat(-1)),
        rat(1),
    ));
    entries.push(ass_entry(
        "idem1-zero",
        idem1_algebra(),
        Matrix::zeros(1, 1),
        Matrix::zeros(1, 1),
        rat(0),
    ));
    entries.push(ass_entry(
        "a2-zero",
        a2_algebra(),
        Matrix::zeros(2, 2),
        Matrix::zeros(2, 2),
        rat(0),
    ));
    entries.push(ass_entry(
        "a2-maps",
        a2_algebra(),
        Matrix::from_int_rows(&[&[0, 0], &[0, 1]]),
        Matrix::from_int_rows(&[&[0, 0], &[0, -1]]),
        rat(1),
    ));
    entries.push(ass_entry(
        "zero-product2",
        AssocAlgebra::zero_product(2),
        Matrix::zeros(2, 2),
        Matrix::zeros(2, 2),
        rat(0),
    ));
    entries.push(ass_entry(
        "mat2-zero",
        mat2_algebra(),
        Matrix::zeros(4, 4),
        Matrix::zeros(4, 4),
        rat(0),
    ));
    entries.push(ass_entry(
        "mat2-neg-id",
        mat2_algebra(),
        Matrix::zeros(4, 4),
        Matrix::identity(4).scale(&rat(-1)),
        rat(1),
    ));
    entries
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_entries_validate() {
        assert_eq!(lie_corpus().len(), 7);
        assert_eq!(ass_corpus().len(), 7);
    }
}
