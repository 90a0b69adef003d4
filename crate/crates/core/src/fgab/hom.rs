use num_bigint::BigInt;
use serde::Serialize;

use super::group::FgAbGroup;
use super::lattice::Lattice;
use super::matrix::IntMatrix;
use super::snf::{kernel_basis, snf, solve_with};
use crate::error::{Error, Result};

/// A homomorphism of presented groups, given by the images of the source
/// generators (column `j` is the image of generator `j`).
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Checks that every source relation lands in the target relation lattice.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.shape() != (target.n_gens(), source.n_gens()) {
            return Err(Error::Shape(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.n_gens(),
                source.n_gens()
            )));
        }
        for (k, rel) in source.relations().row_iter().enumerate() {
            let img = matrix.mul_vec(rel);
            if !target.is_zero_element(&img) {
                return Err(Error::IllDefined(format!("source relation {k} does not map to zero")));
            }
        }
        Ok(GroupHom { source, target, matrix })
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.n_gens()) }
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.n_gens(), source.n_gens()),
        }
    }

    /// Multiplication by `k` on `g`.
    pub fn scalar(g: &FgAbGroup, k: i64) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.n_gens()).scale(&BigInt::from(k)),
        }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(x)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if !self.target.same_presentation(&other.source) {
            return Err(Error::NotComposable("target and source presentations differ".into()));
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.mul(&self.matrix),
        })
    }

    pub fn compose(&self, first: &GroupHom) -> Result<GroupHom> {
        first.then(self)
    }

    fn check_parallel(&self, other: &GroupHom) -> Result<()> {
        if !self.source.same_presentation(&other.source) || !self.target.same_presentation(&other.target) {
            return Err(Error::NotComposable("homs are not parallel".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &GroupHom) -> Result<GroupHom> {
        self.check_parallel(other)?;
        Ok(GroupHom { source: self.source.clone(), target: self.target.clone(), matrix: self.matrix.add(&other.matrix) })
    }

    pub fn sub(&self, other: &GroupHom) -> Result<GroupHom> {
        self.check_parallel(other)?;
        Ok(GroupHom { source: self.source.clone(), target: self.target.clone(), matrix: self.matrix.sub(&other.matrix) })
    }

    /// True when every generator maps to zero in the target.
    pub fn is_zero(&self) -> bool {
        (0..self.source.n_gens()).all(|j| self.target.is_zero_element(&self.matrix.col(j)))
    }

    /// Equality as maps (not as matrices).
    pub fn equals(&self, other: &GroupHom) -> bool {
        self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// Sublattice of `Z^{target gens}` spanned by the image and the target relations.
    pub fn image_lattice(&self) -> Lattice {
        let gens = (0..self.source.n_gens())
            .map(|j| self.matrix.col(j))
            .chain(self.target.relations().row_iter().map(<[BigInt]>::to_vec));
        Lattice::from_generators(self.target.n_gens(), gens)
    }

    /// Basis (columns) of `{x in Z^{source gens} : f(x) = 0 in the target}`.
    fn kernel_lattice_basis(&self) -> IntMatrix {
        let n = self.source.n_gens();
        let rel_t = self.target.relations().transpose();
        // [f | -R^T] (x, y) = 0
        let system = self.matrix.hstack(&rel_t.neg());
        let k = kernel_basis(&system);
        let rows: Vec<usize> = (0..n).collect();
        let cols: Vec<usize> = (0..k.cols()).collect();
        let proj = k.submatrix(&rows, &cols);
        let lat = Lattice::from_generators(n, (0..proj.cols()).map(|j| proj.col(j)));
        IntMatrix::from_columns(lat.basis(), n)
    }

    pub fn kernel_lattice(&self) -> Lattice {
        let b = self.kernel_lattice_basis();
        Lattice::from_generators(self.source.n_gens(), (0..b.cols()).map(|j| b.col(j)))
    }

    /// Kernel with its inclusion into the source.
    pub fn kernel(&self) -> (FgAbGroup, GroupHom) {
        subgroup_from_basis(&self.source, self.kernel_lattice_basis())
    }

    /// Cokernel with the projection from the target.
    pub fn cokernel(&self) -> (FgAbGroup, GroupHom) {
        let extra = self.matrix.transpose();
        let q = FgAbGroup::new(self.target.n_gens(), self.target.relations().vstack(&extra))
            .expect("cokernel keeps generator count");
        let proj = GroupHom { source: self.target.clone(), target: q.clone(), matrix: IntMatrix::identity(q.n_gens()) };
        (q, proj)
    }

    /// Image as an abstract group, with its inclusion into the target.
    pub fn image(&self) -> (FgAbGroup, GroupHom) {
        let lat = self.image_lattice();
        let basis = IntMatrix::from_columns(lat.basis(), self.target.n_gens());
        subgroup_from_basis(&self.target, basis)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_trivial()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Finds `x` with `f(x) = y` in the target, if one exists.
    pub fn preimage(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let system = self.matrix.hstack(&self.target.relations().transpose());
        let sol = solve_with(&snf(&system), y)?;
        Some(sol[..self.source.n_gens()].to_vec())
    }

    /// Two-sided inverse of an isomorphism.
    pub fn inverse(&self) -> Result<GroupHom> {
        if !self.is_iso() {
            return Err(Error::NotIso("homomorphism is not bijective".into()));
        }
        let system = snf(&self.matrix.hstack(&self.target.relations().transpose()));
        let cols: Vec<Vec<BigInt>> = (0..self.target.n_gens())
            .map(|j| {
                let e = self.target.generator(j);
                let sol = solve_with(&system, &e).expect("surjective map has preimages");
                sol[..self.source.n_gens()].to_vec()
            })
            .collect();
        let m = IntMatrix::from_columns(&cols, self.source.n_gens());
        GroupHom::new(self.target.clone(), self.source.clone(), m)
    }

    /// Factors `self` through an injective `inc: K -> target`, returning
    /// `g: source -> K` with `inc ∘ g = self`.
    pub fn factor_through_injection(&self, inc: &GroupHom) -> Result<GroupHom> {
        if !inc.target.same_presentation(&self.target) {
            return Err(Error::NotComposable("injection does not land in the target".into()));
        }
        let k = inc.source.n_gens();
        let system = snf(&inc.matrix.hstack(&self.target.relations().transpose()));
        let mut cols = Vec::with_capacity(self.source.n_gens());
        for j in 0..self.source.n_gens() {
            let sol = solve_with(&system, &self.matrix.col(j)).ok_or_else(|| {
                Error::IllDefined(format!("image of generator {j} is not in the subgroup"))
            })?;
            cols.push(sol[..k].to_vec());
        }
        GroupHom::new(self.source.clone(), inc.source.clone(), IntMatrix::from_columns(&cols, k))
    }

    /// Lifts `self` through a surjection `proj: X -> target`: returns
    /// `g: source -> X` with `proj ∘ g = self` (requires a free source).
    pub fn lift_through_surjection(&self, proj: &GroupHom) -> Result<GroupHom> {
        let mut cols = Vec::new();
        for j in 0..self.source.n_gens() {
            let pre = proj
                .preimage(&self.matrix.col(j))
                .ok_or_else(|| Error::IllDefined(format!("generator {j} has no preimage")))?;
            cols.push(pre);
        }
        GroupHom::new(self.source.clone(), proj.source.clone(), IntMatrix::from_columns(&cols, proj.source.n_gens()))
    }

    /// The map induced on presentations with the same generators but more relations.
    pub fn with_presentations(&self, source: &FgAbGroup, target: &FgAbGroup) -> Result<GroupHom> {
        GroupHom::new(source.clone(), target.clone(), self.matrix.clone())
    }

    pub fn tensor(&self, other: &GroupHom) -> GroupHom {
        GroupHom {
            source: self.source.tensor(&other.source),
            target: self.target.tensor(&other.target),
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    pub fn direct_sum(&self, other: &GroupHom) -> GroupHom {
        GroupHom {
            source: FgAbGroup::direct_sum(&[&self.source, &other.source]),
            target: FgAbGroup::direct_sum(&[&self.target, &other.target]),
            matrix: self.matrix.block_diag(&other.matrix),
        }
    }
}

fn subgroup_from_basis(ambient: &FgAbGroup, basis: IntMatrix) -> (FgAbGroup, GroupHom) {
    // Relations of the subgroup: ambient relations written in the basis.
    let k = basis.cols();
    let system = snf(&basis);
    let mut rows = Vec::new();
    for rel in ambient.relations().row_iter() {
        if let Some(c) = solve_with(&system, rel) {
            rows.push(c);
        }
    }
    // Relations of the ambient group that fall outside the span cannot occur when
    // the basis spans a lattice containing them; the caller guarantees that.
    let sub = FgAbGroup::new(k, IntMatrix::from_rows_with_cols(&rows, k)).expect("consistent shapes");
    let inc = GroupHom { source: sub.clone(), target: ambient.clone(), matrix: basis };
    (sub, inc)
}

/// Per-joint outcome of an exactness check.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Joint {
    /// Index `i` of the joint between map `i` and map `i + 1`.
    pub index: usize,
    pub image_in_kernel: bool,
    pub kernel_in_image: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ExactnessReport {
    pub exact: bool,
    pub joints: Vec<Joint>,
}

/// Checks `image(f_i) = kernel(f_{i+1})` at every joint of a composable chain,
/// comparing subgroups as lattices in both directions.
pub fn is_exact(seq: &[GroupHom]) -> Result<ExactnessReport> {
    for (i, w) in seq.windows(2).enumerate() {
        if !w[0].target.same_presentation(&w[1].source) {
            return Err(Error::NotComposable(format!("maps {i} and {} do not compose", i + 1)));
        }
    }
    let joints: Vec<Joint> = seq
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let image = w[0].image_lattice();
            let kernel = w[1].kernel_lattice();
            Joint { index: i, image_in_kernel: kernel.contains_lattice(&image), kernel_in_image: image.contains_lattice(&kernel) }
        })
        .collect();
    let exact = joints.iter().all(|j| j.image_in_kernel && j.kernel_in_image);
    Ok(ExactnessReport { exact, joints })
}

/// `0 -> A -> B -> C -> 0` exactness, including injectivity and surjectivity.
pub fn is_short_exact(f: &GroupHom, g: &GroupHom) -> Result<ExactnessReport> {
    let zero = FgAbGroup::trivial();
    let into = GroupHom::zero(&zero, f.source());
    let out = GroupHom::zero(g.target(), &zero);
    is_exact(&[into, f.clone(), g.clone(), out])
}

/// True when all columns of `m` are zero in `g` (a convenience for matrices
/// not yet wrapped as homs).
pub fn columns_vanish(g: &FgAbGroup, m: &IntMatrix) -> bool {
    (0..m.cols()).all(|j| g.is_zero_element(&m.col(j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::group::Invariants;
    use crate::fgab::matrix::bigvec;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    #[test]
    fn kernel_cokernel_of_doubling_on_z() {
        let f = GroupHom::scalar(&z(), 2);
        assert!(f.kernel().0.is_trivial());
        assert_eq!(f.cokernel().0.invariants(), &Invariants { free_rank: 0, torsion: bigvec(&[2]) });
    }

    #[test]
    fn kernel_of_doubling_on_z4() {
        let z4 = FgAbGroup::cyclic(4);
        let f = GroupHom::scalar(&z4, 2);
        let (k, inc) = f.kernel();
        // Oracle: of the four elements only 0 and 2 double to 0.
        let brute = z4.elements().unwrap().into_iter().filter(|x| z4.is_zero_element(&f.apply(x))).count();
        assert_eq!(brute, 2);
        assert_eq!(k.order(), Some(BigInt::from(2)));
        assert!(inc.then(&f).unwrap().is_zero());
    }

    #[test]
    fn ill_defined_hom_is_rejected() {
        let z2 = FgAbGroup::cyclic(2);
        let m = IntMatrix::identity(1);
        assert!(matches!(GroupHom::new(z2, z(), m), Err(Error::IllDefined(_))));
    }

    #[test]
    fn short_sequences() {
        let two = GroupHom::scalar(&z(), 2);
        let (_, q) = two.cokernel();
        assert!(is_short_exact(&two, &q).unwrap().exact);
        // Z -> Z -> Z/4 with x2 then reduction is not exact at the middle.
        let z4 = FgAbGroup::cyclic(4);
        let red = GroupHom::new(z(), z4, IntMatrix::identity(1)).unwrap();
        let rep = is_short_exact(&two, &red).unwrap();
        assert!(!rep.exact);
        // im = 2Z, ker = 4Z.
        assert!(!rep.joints[1].image_in_kernel && rep.joints[1].kernel_in_image);
    }

    #[test]
    fn non_composable_chain_is_an_error() {
        let a = GroupHom::identity(&z());
        let b = GroupHom::identity(&FgAbGroup::cyclic(2));
        assert!(is_exact(&[a, b]).is_err());
    }

    #[test]
    fn inverse_of_automorphism() {
        let g = FgAbGroup::free(2);
        let f = GroupHom::new(g.clone(), g.clone(), IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]])).unwrap();
        let inv = f.inverse().unwrap();
        assert!(f.then(&inv).unwrap().equals(&GroupHom::identity(&g)));
    }

    #[test]
    fn image_of_projection() {
        let g = FgAbGroup::from_orders(&[0, 0]);
        let f = GroupHom::new(g.clone(), g, IntMatrix::from_rows(&[vec![2, 0], vec![0, 0]])).unwrap();
        let (im, _) = f.image();
        assert_eq!(im.invariants(), &Invariants::free(1));
    }
}
