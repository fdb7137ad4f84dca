//! Planted boundary fields on trees of order k >= 3: the order-2 tree is
//! embedded in the order-k tree, the nontrivial constant order-2 solution is
//! planted on it and extended by 1 elsewhere. The result solves the
//! fixed-point equation at every non-root vertex, which yields at least three
//! distinct measures whenever p = 1 mod 4.

use crate::padic::{PadicNorm, PadicNumber};
use crate::ti::{self, ModelParams, SolverError};
use crate::tree::{fixed_point_residual_norm, BoundaryField, CayleyTree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArtError {
    #[error("planting needs tree order at least 3, got {0}")]
    OrderTooSmall(u32),
    #[error("no nontrivial order-2 solution exists: p = 1 mod 4 required")]
    NoSolution,
    #[error("solution index must be 1 or 2, got {0}")]
    BadIndex(u8),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Marks the embedded order-2 subtree inside an order-k tree: the root keeps
/// its first three children (the order-2 root degree), every other marked
/// vertex its first two, by label order.
pub fn embed_order2(tree: &CayleyTree) -> Result<Vec<bool>, ArtError> {
    if tree.order() < 3 {
        return Err(ArtError::OrderTooSmall(tree.order()));
    }
    let mut marked = vec![false; tree.vertex_count()];
    marked[tree.root()] = true;
    for v in 0..tree.vertex_count() {
        if !marked[v] {
            continue;
        }
        let keep = if v == tree.root() { 3 } else { 2 };
        for &c in tree.children(v).iter().take(keep) {
            marked[c] = true;
        }
    }
    Ok(marked)
}

/// A planted boundary field: the chosen order-2 solution on the embedded
/// subtree, 1 everywhere else.
#[derive(Debug, Clone)]
pub struct ArtField {
    index: u8,
    tree: CayleyTree,
    marked: Vec<bool>,
    planted: PadicNumber,
    field: BoundaryField,
}

impl ArtField {
    /// Builds the field for solution index 1 or 2 of the order-2 equation,
    /// on the order-k tree (k >= 3) of the given depth.
    pub fn build(index: u8, params: &ModelParams, depth: u32) -> Result<Self, ArtError> {
        if params.order() < 3 {
            return Err(ArtError::OrderTooSmall(params.order()));
        }
        if !(1..=2).contains(&index) {
            return Err(ArtError::BadIndex(index));
        }
        if params.prime() % 4 != 1 {
            return Err(ArtError::NoSolution);
        }
        let order2 = params.with_order(2)?;
        let sols = ti::solve_k2(&order2)?;
        debug_assert_eq!(sols.representative_count(), 3);
        let planted = sols.h_roots()[index as usize].clone();
        let tree = CayleyTree::new(params.order(), depth)?;
        let marked = embed_order2(&tree)?;
        let one = params.context().one();
        let values = (0..tree.vertex_count())
            .map(|v| {
                if marked[v] {
                    planted.clone()
                } else {
                    one.clone()
                }
            })
            .collect();
        let field = BoundaryField::from_values(&tree, params.clone(), values)?;
        Ok(ArtField {
            index,
            tree,
            marked,
            planted,
            field,
        })
    }

    pub fn index(&self) -> u8 {
        self.index
    }

    pub fn tree(&self) -> &CayleyTree {
        &self.tree
    }

    pub fn marked(&self) -> &[bool] {
        &self.marked
    }

    /// The order-2 solution planted on the embedded subtree.
    pub fn planted_value(&self) -> &PadicNumber {
        &self.planted
    }

    pub fn field(&self) -> &BoundaryField {
        &self.field
    }
}

/// Residual report over all non-root internal vertices.
#[derive(Debug, Clone)]
pub struct ArtReport {
    pub checked: usize,
    pub failures: Vec<usize>,
    pub max_residual: PadicNorm,
    pub tolerance_exponent: i64,
    pub passed: bool,
}

/// Checks the fixed-point equation at every non-root internal vertex of the
/// planted field. Marked vertices reduce to the order-2 identity because
/// unmarked children contribute unit factors; unmarked vertices have only
/// unmarked children and are trivially satisfied.
pub fn verify_art(art: &ArtField, tolerance_exponent: Option<i64>) -> Result<ArtReport, ArtError> {
    let tol =
        tolerance_exponent.unwrap_or(art.field.params().context().working_precision() as i64 - 4);
    let tree = &art.tree;
    let mut checked = 0usize;
    let mut failures = Vec::new();
    let mut max_residual = PadicNorm::Zero;
    for v in 1..tree.vertex_count() {
        if tree.is_leaf(v) {
            continue;
        }
        let bound = fixed_point_residual_norm(tree, &art.field, v)?;
        checked += 1;
        if !bound.certifies_at_most(tol) {
            failures.push(v);
        }
        let norm = bound.norm();
        if matches!(
            norm.partial_cmp(&max_residual),
            Some(std::cmp::Ordering::Greater)
        ) {
            max_residual = norm;
        }
    }
    Ok(ArtReport {
        checked,
        failures: failures.clone(),
        max_residual,
        tolerance_exponent: tol,
        passed: failures.is_empty(),
    })
}

/// True when the two fields differ at some vertex, at the given depth of
/// agreement.
pub fn fields_distinct(
    a: &BoundaryField,
    b: &BoundaryField,
    tolerance_exponent: i64,
) -> Result<bool, ArtError> {
    debug_assert_eq!(a.len(), b.len());
    for v in 0..a.len() {
        if !a
            .value(v)
            .eq_mod(b.value(v), tolerance_exponent)
            .map_err(TreeError::from)?
        {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ti::Coupling;

    fn params(p: u64, k: u32) -> ModelParams {
        ModelParams::new(p, Coupling::canonical(p), k).unwrap()
    }

    #[test]
    fn embedding_shape() {
        let t = CayleyTree::new(3, 2).unwrap();
        let marked = embed_order2(&t).unwrap();
        // root keeps 3 of its 4 children
        let root_marked: Vec<bool> = t.children(0).iter().map(|&c| marked[c]).collect();
        assert_eq!(root_marked, vec![true, true, true, false]);
        // each marked level-1 vertex keeps 2 of 3 children
        for &c in t.children(0) {
            let kept = t.children(c).iter().filter(|&&g| marked[g]).count();
            assert_eq!(kept, if marked[c] { 2 } else { 0 });
        }
    }

    #[test]
    fn embedding_level_counts() {
        // the marked set is an order-2 tree: 3 * 2^(m-1) vertices per level
        let t = CayleyTree::new(4, 4).unwrap();
        let marked = embed_order2(&t).unwrap();
        for m in 1..=4u32 {
            let count = t.sphere(m).filter(|&v| marked[v]).count();
            assert_eq!(count, 3 * 2usize.pow(m - 1), "level {}", m);
        }
    }

    #[test]
    fn embedding_requires_order_three() {
        let t = CayleyTree::new(2, 2).unwrap();
        assert!(matches!(embed_order2(&t), Err(ArtError::OrderTooSmall(2))));
    }

    #[test]
    fn build_requires_one_mod_four() {
        assert!(matches!(
            ArtField::build(1, &params(7, 3), 3),
            Err(ArtError::NoSolution)
        ));
        assert!(ArtField::build(1, &params(5, 3), 3).is_ok());
        assert!(matches!(
            ArtField::build(3, &params(5, 3), 3),
            Err(ArtError::BadIndex(3))
        ));
        assert!(matches!(
            ArtField::build(1, &params(5, 2), 3),
            Err(ArtError::OrderTooSmall(2))
        ));
    }

    #[test]
    fn verify_planted_fields() {
        for p in [5u64, 13, 17] {
            for k in [3u32, 4, 5] {
                let m = params(p, k);
                for index in [1u8, 2] {
                    let art = ArtField::build(index, &m, 3).unwrap();
                    let report = verify_art(&art, None).unwrap();
                    assert!(report.passed, "p={} k={} i={}", p, k, index);
                    assert!(report.checked > 0);
                }
            }
        }
    }

    #[test]
    fn corrupting_a_marked_vertex_breaks_the_parent() {
        let m = params(5, 3);
        let art = ArtField::build(1, &m, 3).unwrap();
        let tree = art.tree().clone();
        // first marked level-2 vertex; its parent is marked and internal
        let victim = tree
            .sphere(2)
            .find(|&v| art.marked()[v])
            .expect("marked level-2 vertex exists");
        let parent = tree.parent(victim).unwrap();
        let mut values: Vec<PadicNumber> = (0..tree.vertex_count())
            .map(|v| art.field().value(v).clone())
            .collect();
        values[victim] = m.context().one();
        let broken = BoundaryField::from_values(&tree, m.clone(), values).unwrap();
        let r = crate::tree::fixed_point_residual(&tree, &broken, parent).unwrap();
        assert!(!r.is_zero());
        assert!(r.valuation().unwrap() < 4);
    }

    #[test]
    fn three_fields_pairwise_distinct() {
        let m = params(13, 4);
        let art1 = ArtField::build(1, &m, 3).unwrap();
        let art2 = ArtField::build(2, &m, 3).unwrap();
        let tree = art1.tree();
        let ones = BoundaryField::constant(tree, m.clone(), m.context().one()).unwrap();
        assert!(fields_distinct(art1.field(), art2.field(), 8).unwrap());
        assert!(fields_distinct(art1.field(), &ones, 8).unwrap());
        assert!(fields_distinct(art2.field(), &ones, 8).unwrap());
        assert!(!fields_distinct(art1.field(), art1.field(), 8).unwrap());
    }

    #[test]
    fn planted_field_is_consistent_under_enumeration() {
        // a non-constant field with zero residual everywhere passes the
        // brute-force consistency oracle, the non-translation-invariant
        // direction of the finite-volume equivalence
        let depth = 2u32;
        let tree = CayleyTree::new(3, depth).unwrap();
        let guard = crate::tree::consistency_guard_digits(&tree, depth);
        let m = ModelParams::with_precision(5, Coupling::canonical(5), 3, 32 + guard).unwrap();
        let art = ArtField::build(1, &m, depth).unwrap();
        let report = crate::tree::check_consistency(art.tree(), depth, art.field(), 26).unwrap();
        assert!(report.passed, "max residual {}", report.max_residual);
        assert_eq!(report.failures, 0);
    }

    #[test]
    fn planted_value_solves_order_two_equation() {
        let m = params(17, 3);
        for index in [1u8, 2] {
            let art = ArtField::build(index, &m, 2).unwrap();
            let order2 = m.with_order(2).unwrap();
            let bound = ti::residual_norm(art.planted_value(), &order2).unwrap();
            assert!(bound.certifies_at_most(28));
        }
    }
}
