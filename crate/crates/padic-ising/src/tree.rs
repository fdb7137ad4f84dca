//! Finite truncations of the Cayley tree, spin configurations, the
//! Hamiltonian, finite-volume distributions, and the brute-force consistency
//! oracle by exact enumeration.

use crate::padic::{PadicError, PadicNorm, PadicNumber};
use crate::ti::ModelParams;

/// Largest ball (in spins) that exact enumeration will sweep: 2^22 terms.
pub const ENUMERATION_CAP: usize = 22;

/// Structural cap on tree construction; enumeration has its own, much
/// smaller, cap.
const MAX_VERTICES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("tree of {vertices} vertices exceeds the cap of {cap}")]
    TooLarge { vertices: usize, cap: usize },
    #[error("configuration region does not match the requested volume")]
    RegionMismatch,
    #[error("normalizing constant vanishes at the working precision")]
    DegenerateNormalizer,
    #[error("vertex {0} has no children in this finite tree")]
    MissingChildren(usize),
    #[error("the fixed-point equation excludes the root vertex")]
    RootExcluded,
    #[error("boundary fields must be nonzero everywhere (vertex {0})")]
    ZeroFieldValue(usize),
    #[error("tree order must be at least 1")]
    BadOrder,
    #[error(transparent)]
    Arithmetic(#[from] PadicError),
}

/// A depth-n truncation of the Cayley tree of order k.
///
/// The root has k+1 children and every other internal vertex k, matching the
/// degree rule "k+1 edges at every vertex" of the infinite tree. Vertices are
/// indexed in level (BFS) order, so every ball V_m and sphere W_m is a
/// contiguous index range.
#[derive(Debug, Clone)]
pub struct CayleyTree {
    order: u32,
    depth: u32,
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    level_start: Vec<usize>,
}

impl CayleyTree {
    pub fn new(order: u32, depth: u32) -> Result<Self, TreeError> {
        if order < 1 {
            return Err(TreeError::BadOrder);
        }
        // |V_n| = 1 + (k+1) (k^n - 1) / (k - 1), checked incrementally
        let mut parent = vec![usize::MAX];
        let mut children: Vec<Vec<usize>> = vec![Vec::new()];
        let mut level_start = vec![0usize, 1];
        let mut frontier = vec![0usize];
        for level in 1..=depth {
            let mut next = Vec::new();
            for &x in &frontier {
                let degree = if x == 0 { order + 1 } else { order };
                for _ in 0..degree {
                    let idx = parent.len();
                    if idx >= MAX_VERTICES {
                        return Err(TreeError::TooLarge {
                            vertices: idx + 1,
                            cap: MAX_VERTICES,
                        });
                    }
                    parent.push(x);
                    children.push(Vec::new());
                    children[x].push(idx);
                    next.push(idx);
                }
            }
            level_start.push(parent.len());
            frontier = next;
            let _ = level;
        }
        Ok(CayleyTree {
            order,
            depth,
            parent,
            children,
            level_start,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn edge_count(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        if v == 0 {
            None
        } else {
            Some(self.parent[v])
        }
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn level(&self, v: usize) -> u32 {
        // level_start is sorted; fine for the sizes at hand
        (self.level_start.partition_point(|&s| s <= v) - 1) as u32
    }

    /// Number of vertices in the ball V_m.
    pub fn ball_count(&self, m: u32) -> usize {
        self.level_start[(m + 1) as usize]
    }

    /// Index range of the sphere W_m.
    pub fn sphere(&self, m: u32) -> std::ops::Range<usize> {
        self.level_start[m as usize]..self.level_start[(m + 1) as usize]
    }

    pub fn sphere_count(&self, m: u32) -> usize {
        self.sphere(m).len()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    /// Graph distance via the lowest common ancestor.
    pub fn distance(&self, mut x: usize, mut y: usize) -> u32 {
        let mut d = 0;
        while self.level(x) > self.level(y) {
            x = self.parent[x];
            d += 1;
        }
        while self.level(y) > self.level(x) {
            y = self.parent[y];
            d += 1;
        }
        while x != y {
            x = self.parent[x];
            y = self.parent[y];
            d += 2;
        }
        d
    }
}

/// The vertex set a configuration lives on: a ball V_m or a sphere W_m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Ball(u32),
    Sphere(u32),
}

/// A spin assignment sigma: region -> {-1, +1}, stored as bits in level
/// order (bit set = +1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinConfig {
    region: Region,
    bits: u64,
    size: u32,
}

impl SpinConfig {
    fn region_range(tree: &CayleyTree, region: Region) -> std::ops::Range<usize> {
        match region {
            Region::Ball(m) => 0..tree.ball_count(m),
            Region::Sphere(m) => tree.sphere(m),
        }
    }

    pub fn from_bits(tree: &CayleyTree, region: Region, bits: u64) -> Result<Self, TreeError> {
        let range = Self::region_range(tree, region);
        let size = range.len() as u32;
        if size > 63 {
            return Err(TreeError::TooLarge {
                vertices: size as usize,
                cap: 63,
            });
        }
        Ok(SpinConfig {
            region,
            bits: bits & ((1u64 << size) - 1),
            size,
        })
    }

    pub fn all_plus(tree: &CayleyTree, region: Region) -> Result<Self, TreeError> {
        let mut c = Self::from_bits(tree, region, 0)?;
        c.bits = (1u64 << c.size) - 1;
        Ok(c)
    }

    pub fn all_minus(tree: &CayleyTree, region: Region) -> Result<Self, TreeError> {
        Self::from_bits(tree, region, 0)
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Spin at a vertex of the region.
    pub fn spin(&self, tree: &CayleyTree, v: usize) -> Result<i8, TreeError> {
        let range = Self::region_range(tree, self.region);
        if !range.contains(&v) {
            return Err(TreeError::RegionMismatch);
        }
        let offset = v - range.start;
        Ok(if (self.bits >> offset) & 1 == 1 {
            1
        } else {
            -1
        })
    }

    /// Global spin flip.
    pub fn flipped(&self) -> SpinConfig {
        SpinConfig {
            region: self.region,
            bits: !self.bits & ((1u64 << self.size) - 1),
            size: self.size,
        }
    }

    /// Restriction to a smaller ball.
    pub fn restrict(&self, tree: &CayleyTree, m: u32) -> Result<SpinConfig, TreeError> {
        match self.region {
            Region::Ball(n) if m <= n => SpinConfig::from_bits(tree, Region::Ball(m), self.bits),
            _ => Err(TreeError::RegionMismatch),
        }
    }
}

/// Merges a ball configuration with the next sphere:
/// `(sigma_{n-1} v phi)(x)` is sigma on V_{n-1} and phi on W_n.
pub fn extend_config(
    tree: &CayleyTree,
    inner: &SpinConfig,
    boundary: &SpinConfig,
) -> Result<SpinConfig, TreeError> {
    let (Region::Ball(m), Region::Sphere(n)) = (inner.region, boundary.region) else {
        return Err(TreeError::RegionMismatch);
    };
    if n != m + 1 || n > tree.depth() {
        return Err(TreeError::RegionMismatch);
    }
    let shift = tree.ball_count(m);
    SpinConfig::from_bits(tree, Region::Ball(n), inner.bits | (boundary.bits << shift))
}

/// A boundary field: one nonzero p-adic value per vertex, plus the model
/// parameters it belongs to.
#[derive(Debug, Clone)]
pub struct BoundaryField {
    params: ModelParams,
    values: Vec<PadicNumber>,
}

impl BoundaryField {
    pub fn constant(
        tree: &CayleyTree,
        params: ModelParams,
        value: PadicNumber,
    ) -> Result<Self, TreeError> {
        if value.is_zero() {
            return Err(TreeError::ZeroFieldValue(0));
        }
        Ok(BoundaryField {
            params,
            values: vec![value; tree.vertex_count()],
        })
    }

    pub fn from_values(
        tree: &CayleyTree,
        params: ModelParams,
        values: Vec<PadicNumber>,
    ) -> Result<Self, TreeError> {
        if values.len() != tree.vertex_count() {
            return Err(TreeError::RegionMismatch);
        }
        if let Some(i) = values.iter().position(|v| v.is_zero()) {
            return Err(TreeError::ZeroFieldValue(i));
        }
        Ok(BoundaryField { params, values })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn value(&self, v: usize) -> &PadicNumber {
        &self.values[v]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Sum of sigma(x) sigma(y) over the edges of the ball the configuration
/// covers.
fn edge_spin_sum(tree: &CayleyTree, config: &SpinConfig) -> Result<i64, TreeError> {
    let Region::Ball(n) = config.region else {
        return Err(TreeError::RegionMismatch);
    };
    let nv = tree.ball_count(n);
    let bits = config.bits;
    let mut s = 0i64;
    for v in 1..nv {
        let a = (bits >> tree.parent[v]) & 1;
        let b = (bits >> v) & 1;
        s += if a == b { 1 } else { -1 };
    }
    Ok(s)
}

/// The finite-volume Hamiltonian `H_n(sigma) = J sum sigma(x) sigma(y)`.
pub fn hamiltonian(
    tree: &CayleyTree,
    config: &SpinConfig,
    params: &ModelParams,
) -> Result<PadicNumber, TreeError> {
    let s = edge_spin_sum(tree, config)?;
    let j = params.coupling_value();
    Ok(j.mul(&params.context().integer(s))?)
}

/// Interaction weights exp(J)^s for s in [-edges, edges], indexed s + edges.
fn transfer_powers(params: &ModelParams, edges: usize) -> Result<Vec<PadicNumber>, TreeError> {
    let u = params.exp_coupling();
    let mut table = Vec::with_capacity(2 * edges + 1);
    let mut cur = u.powi(-(edges as i64))?;
    table.push(cur.clone());
    for _ in 0..2 * edges {
        cur = cur.mul(u)?;
        table.push(cur.clone());
    }
    Ok(table)
}

/// Boundary weight `prod_{x in W_n} h_x^{sigma(x)}` of a ball configuration.
fn boundary_weight(
    tree: &CayleyTree,
    n: u32,
    bits: u64,
    field: &BoundaryField,
) -> Result<PadicNumber, TreeError> {
    let mut w = field.params.context().one();
    for x in tree.sphere(n) {
        let h = field.value(x);
        let factor = if (bits >> x) & 1 == 1 {
            h.clone()
        } else {
            h.inv()?
        };
        w = w.mul(&factor)?;
    }
    Ok(w)
}

/// Product table over all sign patterns of a factor list: entry `pattern` is
/// `prod_i (bit_i ? h_i : h_i^-1)`. Built incrementally with one multiply per
/// entry; exact modular arithmetic keeps any association bit-identical.
fn pattern_products(
    ctx: crate::padic::PadicContext,
    factors: &[PadicNumber],
) -> Result<Vec<PadicNumber>, TreeError> {
    let m = factors.len();
    debug_assert!(m < 32);
    let mut all_inverse = ctx.one();
    let mut squares = Vec::with_capacity(m);
    for f in factors {
        all_inverse = all_inverse.mul(&f.inv()?)?;
        squares.push(f.mul(f)?);
    }
    let mut table = Vec::with_capacity(1 << m);
    table.push(all_inverse);
    for pattern in 1u64..1 << m {
        let low = pattern.trailing_zeros() as usize;
        let prev = &table[(pattern & (pattern - 1)) as usize];
        // flipping bit `low` swaps h^-1 for h: multiply by h^2
        table.push(prev.mul(&squares[low])?);
    }
    Ok(table)
}

/// Boundary weights for every sphere pattern, split into two half-tables so
/// the per-configuration cost is a single multiply.
struct BoundaryTables {
    low_bits: u32,
    low: Vec<PadicNumber>,
    high: Vec<PadicNumber>,
}

impl BoundaryTables {
    fn build(tree: &CayleyTree, n: u32, field: &BoundaryField) -> Result<Self, TreeError> {
        let ctx = field.params.context();
        let sphere: Vec<PadicNumber> = tree.sphere(n).map(|x| field.value(x).clone()).collect();
        let low_bits = (sphere.len() / 2) as u32;
        let (low, high) = sphere.split_at(low_bits as usize);
        Ok(BoundaryTables {
            low_bits,
            low: pattern_products(ctx, low)?,
            high: pattern_products(ctx, high)?,
        })
    }

    fn weight(&self, sphere_pattern: u64) -> Result<PadicNumber, TreeError> {
        let lo = &self.low[(sphere_pattern & ((1 << self.low_bits) - 1)) as usize];
        let hi = &self.high[(sphere_pattern >> self.low_bits) as usize];
        Ok(lo.mul(hi)?)
    }
}

/// Weight sums over all configurations of the ball V_n, bucketed by the
/// lowest `bucket_bits` bits (the configuration on an inner ball). Summation
/// runs in fixed ascending-index order.
fn weight_sums(
    tree: &CayleyTree,
    n: u32,
    field: &BoundaryField,
    bucket_bits: u32,
) -> Result<Vec<PadicNumber>, TreeError> {
    let nv = tree.ball_count(n);
    if nv > ENUMERATION_CAP {
        return Err(TreeError::TooLarge {
            vertices: nv,
            cap: ENUMERATION_CAP,
        });
    }
    let edges = nv - 1;
    let upow = transfer_powers(&field.params, edges)?;
    let tables = BoundaryTables::build(tree, n, field)?;
    let sphere_start = tree.sphere(n).start;
    let ctx = field.params.context();
    let mut buckets = vec![ctx.zero(); 1 << bucket_bits];
    let mask = (1u64 << bucket_bits) - 1;
    for bits in 0u64..1 << nv {
        let mut s = 0i64;
        for v in 1..nv {
            let a = (bits >> tree.parent[v]) & 1;
            let b = (bits >> v) & 1;
            s += if a == b { 1 } else { -1 };
        }
        let term = upow[(s + edges as i64) as usize].mul(&tables.weight(bits >> sphere_start)?)?;
        let idx = (bits & mask) as usize;
        buckets[idx] = buckets[idx].add(&term)?;
    }
    Ok(buckets)
}

/// Unnormalized weight of one configuration: `exp(H_n) * boundary product`.
/// Uses exp(J)^s, exact on the admissible coupling domain.
pub fn config_weight(
    tree: &CayleyTree,
    config: &SpinConfig,
    field: &BoundaryField,
) -> Result<PadicNumber, TreeError> {
    let Region::Ball(n) = config.region else {
        return Err(TreeError::RegionMismatch);
    };
    let s = edge_spin_sum(tree, config)?;
    let u = field.params.exp_coupling().powi(s)?;
    Ok(u.mul(&boundary_weight(tree, n, config.bits, field)?)?)
}

/// The normalizing constant `Z_n`: exact sum of all configuration weights on
/// V_n, in fixed index order.
pub fn partition_function(
    tree: &CayleyTree,
    n: u32,
    field: &BoundaryField,
) -> Result<PadicNumber, TreeError> {
    let mut sums = weight_sums(tree, n, field, 0)?;
    Ok(sums.pop().expect("single bucket"))
}

/// The finite-volume p-adic probability of one configuration.
pub fn measure(
    tree: &CayleyTree,
    config: &SpinConfig,
    field: &BoundaryField,
) -> Result<PadicNumber, TreeError> {
    let Region::Ball(n) = config.region else {
        return Err(TreeError::RegionMismatch);
    };
    let z = partition_function(tree, n, field)?;
    measure_with_normalizer(tree, config, field, &z)
}

/// Same, reusing a precomputed normalizer.
pub fn measure_with_normalizer(
    tree: &CayleyTree,
    config: &SpinConfig,
    field: &BoundaryField,
    normalizer: &PadicNumber,
) -> Result<PadicNumber, TreeError> {
    if normalizer.is_zero() {
        return Err(TreeError::DegenerateNormalizer);
    }
    Ok(config_weight(tree, config, field)?.div(normalizer)?)
}

/// Both sides of the local fixed-point equation at a non-root vertex:
/// `h_x^2` and `prod_{y in S(x)} (theta h_y^2 + 1) / (h_y^2 + theta)`.
pub(crate) fn fixed_point_sides(
    tree: &CayleyTree,
    field: &BoundaryField,
    x: usize,
) -> Result<(PadicNumber, PadicNumber), TreeError> {
    if x == tree.root() {
        return Err(TreeError::RootExcluded);
    }
    if tree.is_leaf(x) {
        return Err(TreeError::MissingChildren(x));
    }
    let params = &field.params;
    let one = params.context().one();
    let theta = params.theta();
    let mut rhs = one.clone();
    for &y in tree.children(x) {
        let hy2 = field.value(y).mul(field.value(y))?;
        let factor = theta.mul(&hy2)?.add(&one)?.div(&hy2.add(theta)?)?;
        rhs = rhs.mul(&factor)?;
    }
    let lhs = field.value(x).mul(field.value(x))?;
    Ok((lhs, rhs))
}

/// Left-minus-right of the local fixed-point equation at a non-root vertex:
/// `h_x^2 - prod_{y in S(x)} (theta h_y^2 + 1) / (h_y^2 + theta)`.
///
/// The tracked subtraction can underflow when the field is a solution and
/// nearly all digits cancel; use [`fixed_point_residual_norm`] for a
/// certified bound that never does.
pub fn fixed_point_residual(
    tree: &CayleyTree,
    field: &BoundaryField,
    x: usize,
) -> Result<PadicNumber, TreeError> {
    let (lhs, rhs) = fixed_point_sides(tree, field, x)?;
    Ok(lhs.sub(&rhs)?)
}

/// Certified bound on the norm of the local fixed-point residual.
pub fn fixed_point_residual_norm(
    tree: &CayleyTree,
    field: &BoundaryField,
    x: usize,
) -> Result<crate::padic::NormBound, TreeError> {
    let (lhs, rhs) = fixed_point_sides(tree, field, x)?;
    Ok(lhs.difference_norm(&rhs)?)
}

/// Outcome of the brute-force consistency check between levels n-1 and n.
#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    pub level: u32,
    /// Number of inner configurations checked (2^|V_{n-1}|).
    pub checked: usize,
    pub failures: usize,
    /// Largest certified bound on
    /// |sum_phi mu_n(sigma v phi) - mu_{n-1}(sigma)|_p over all sigma.
    pub max_residual: PadicNorm,
    /// The check passes when every residual norm is at most
    /// p^(-tolerance_exponent).
    pub tolerance_exponent: i64,
    pub passed: bool,
}

/// Verifies `sum_phi mu^(n)(sigma v phi) = mu^(n-1)(sigma)` for every sigma
/// on V_{n-1} by exact enumeration.
///
/// Each measure involves a division by the normalizer, which can carry a
/// large valuation for the nontrivial fields; build the field with guard
/// digits above the tolerance (see `consistency_guard_digits`) so the
/// comparison stays certified.
pub fn check_consistency(
    tree: &CayleyTree,
    n: u32,
    field: &BoundaryField,
    tolerance_exponent: i64,
) -> Result<ConsistencyReport, TreeError> {
    if n < 1 || n > tree.depth() {
        return Err(TreeError::RegionMismatch);
    }
    let nv = tree.ball_count(n);
    if nv > ENUMERATION_CAP {
        return Err(TreeError::TooLarge {
            vertices: nv,
            cap: ENUMERATION_CAP,
        });
    }
    let nv_prev = tree.ball_count(n - 1);
    let ctx = field.params.context();

    // level-n weights bucketed by the inner configuration
    let bucket = weight_sums(tree, n, field, nv_prev as u32)?;
    let mut z_n = ctx.zero();
    for t in &bucket {
        z_n = z_n.add(t)?;
    }
    if z_n.is_zero() {
        return Err(TreeError::DegenerateNormalizer);
    }
    let z_prev = partition_function(tree, n - 1, field)?;
    if z_prev.is_zero() {
        return Err(TreeError::DegenerateNormalizer);
    }

    let mut failures = 0usize;
    let mut max_residual = PadicNorm::Zero;
    for bits in 0u64..1 << nv_prev {
        let inner = SpinConfig::from_bits(tree, Region::Ball(n - 1), bits)?;
        let lhs = bucket[bits as usize].div(&z_n)?;
        let rhs = config_weight(tree, &inner, field)?.div(&z_prev)?;
        let bound = lhs.difference_norm(&rhs)?;
        if !bound.certifies_at_most(tolerance_exponent) {
            failures += 1;
        }
        let norm = bound.norm();
        if matches!(
            norm.partial_cmp(&max_residual),
            Some(std::cmp::Ordering::Greater)
        ) {
            max_residual = norm;
        }
    }
    Ok(ConsistencyReport {
        level: n,
        checked: 1 << nv_prev,
        failures,
        max_residual,
        tolerance_exponent,
        passed: failures == 0,
    })
}

/// Guard digits for the consistency oracle: enough working precision that
/// dividing by a normalizer of large valuation still certifies the tolerance.
pub fn consistency_guard_digits(tree: &CayleyTree, n: u32) -> u32 {
    2 * tree.ball_count(n) as u32 + 8
}
