use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fgab::{bigvec, FgAbGroup, GroupHom, IntMatrix};

/// A commutative ring with involution whose additive group is finitely
/// generated. Products of additive generators are tabulated; everything else
/// extends bilinearly.
#[derive(Clone)]
pub struct InvolutiveRing {
    add: FgAbGroup,
    names: Vec<String>,
    /// `table[i][j]` is `e_i * e_j` in generator coordinates.
    table: Vec<Vec<Vec<BigInt>>>,
    one: Vec<BigInt>,
    w: GroupHom,
}

impl fmt::Debug for InvolutiveRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InvolutiveRing")
            .field("generators", &self.names)
            .field("additive", &self.add.invariants().to_string())
            .finish()
    }
}

impl InvolutiveRing {
    /// Builds a ring and checks every axiom on generators.
    pub fn new(
        add: FgAbGroup,
        names: Vec<String>,
        table: Vec<Vec<Vec<BigInt>>>,
        one: Vec<BigInt>,
        w: IntMatrix,
    ) -> Result<Self> {
        let n = add.n_gens();
        if names.len() != n || table.len() != n || one.len() != n {
            return Err(Error::Shape("generator names, table and unit must match the additive group".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n || row.iter().any(|p| p.len() != n) {
                return Err(Error::Shape(format!("multiplication table row {i} has the wrong shape")));
            }
        }
        let w = GroupHom::new(add.clone(), add.clone(), w)
            .map_err(|e| Error::RingAxiom(format!("involution is not additive: {e}")))?;
        let ring = InvolutiveRing { add, names, table, one, w };
        ring.check_axioms()?;
        Ok(ring)
    }

    /// Same as [`new`](Self::new) with the trivial involution.
    pub fn with_trivial_involution(
        add: FgAbGroup,
        names: Vec<String>,
        table: Vec<Vec<Vec<BigInt>>>,
        one: Vec<BigInt>,
    ) -> Result<Self> {
        let n = add.n_gens();
        Self::new(add, names, table, one, IntMatrix::identity(n))
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.add.n_gens();
        let g = |i: usize| self.add.generator(i);
        let name = |i: usize| &self.names[i];
        // Multiplication must respect the additive relations.
        for (k, rel) in self.add.relations().row_iter().enumerate() {
            for j in 0..n {
                if !self.add.is_zero_element(&self.mul(rel, &g(j))) {
                    return Err(Error::RingAxiom(format!(
                        "multiplication is not well defined: relation {k} times {} is nonzero",
                        name(j)
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul(&g(i), &g(j));
                if !self.add.elements_equal(&ij, &self.mul(&g(j), &g(i))) {
                    return Err(Error::RingAxiom(format!("not commutative: {0}*{1} != {1}*{0}", name(i), name(j))));
                }
                for k in 0..n {
                    let left = self.mul(&ij, &g(k));
                    let right = self.mul(&g(i), &self.mul(&g(j), &g(k)));
                    if !self.add.elements_equal(&left, &right) {
                        return Err(Error::RingAxiom(format!(
                            "not associative: ({0}*{1})*{2} != {0}*({1}*{2})",
                            name(i),
                            name(j),
                            name(k)
                        )));
                    }
                }
            }
            if !self.add.elements_equal(&self.mul(&self.one, &g(i)), &g(i)) {
                return Err(Error::RingAxiom(format!("unit is not neutral on {}", name(i))));
            }
        }
        let ww = self.w.then(&self.w)?;
        if !ww.equals(&GroupHom::identity(&self.add)) {
            return Err(Error::RingAxiom("involution does not square to the identity".into()));
        }
        if !self.add.elements_equal(&self.w.apply(&self.one), &self.one) {
            return Err(Error::RingAxiom("involution does not fix the unit".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.w.apply(&self.mul(&g(i), &g(j)));
                let rhs = self.mul(&self.w.apply(&g(i)), &self.w.apply(&g(j)));
                if !self.add.elements_equal(&lhs, &rhs) {
                    return Err(Error::RingAxiom(format!(
                        "involution is not multiplicative on {}*{}",
                        name(i),
                        name(j)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn additive(&self) -> &FgAbGroup {
        &self.add
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_gens(&self) -> usize {
        self.add.n_gens()
    }

    pub fn one(&self) -> &[BigInt] {
        &self.one
    }

    pub fn involution(&self) -> &GroupHom {
        &self.w
    }

    pub fn table(&self) -> &[Vec<Vec<BigInt>>] {
        &self.table
    }

    pub fn has_trivial_involution(&self) -> bool {
        self.w.equals(&GroupHom::identity(&self.add))
    }

    /// Product of two elements given in generator coordinates (not reduced).
    pub fn mul(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let n = self.n_gens();
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let c = a * b;
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    *o += &c * t;
                }
            }
        }
        out
    }

    pub fn square(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.mul(x, x)
    }

    /// Multiplication by `a` as an additive endomorphism.
    pub fn mul_hom(&self, a: &[BigInt]) -> GroupHom {
        let cols: Vec<Vec<BigInt>> = (0..self.n_gens()).map(|j| self.mul(a, &self.add.generator(j))).collect();
        GroupHom::new(self.add.clone(), self.add.clone(), IntMatrix::from_columns(&cols, self.n_gens()))
            .expect("multiplication is well defined by the ring axioms")
    }

    /// `A/2` with the induced ring structure.
    pub fn mod2(&self) -> InvolutiveRing {
        let n = self.n_gens();
        let twos: Vec<Vec<BigInt>> = (0..n).map(|i| self.add.generator(i).into_iter().map(|x| x * 2).collect()).collect();
        let add = self.add.quotient_by(&twos);
        InvolutiveRing::new(add, self.names.clone(), self.table.clone(), self.one.clone(), self.w.matrix().clone())
            .expect("quotients of rings are rings")
    }

    pub fn has_characteristic_two(&self) -> bool {
        (0..self.n_gens()).all(|i| {
            let two: Vec<BigInt> = self.add.generator(i).into_iter().map(|x| x * 2).collect();
            self.add.is_zero_element(&two)
        })
    }

    /// The squaring map of a ring of characteristic two.
    pub fn frobenius(&self) -> Result<GroupHom> {
        if !self.has_characteristic_two() {
            return Err(Error::Unsupported("the squaring map is additive only in characteristic two".into()));
        }
        let cols: Vec<Vec<BigInt>> = (0..self.n_gens()).map(|i| self.square(&self.add.generator(i))).collect();
        GroupHom::new(self.add.clone(), self.add.clone(), IntMatrix::from_columns(&cols, self.n_gens()))
    }

    /// Formats an element as a linear combination of generator names.
    pub fn format_element(&self, x: &[BigInt]) -> String {
        let x = self.add.normalize(x);
        let terms: Vec<String> = x
            .iter()
            .zip(&self.names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, nm)| if c.is_one() { nm.clone() } else { format!("{c}*{nm}") })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    // Standard examples.

    pub fn integers() -> Self {
        Self::cyclic(0)
    }

    /// `Z/n` (`n = 0` gives `Z`).
    pub fn cyclic(n: u64) -> Self {
        Self::with_trivial_involution(FgAbGroup::cyclic(n), vec!["1".into()], vec![vec![bigvec(&[1])]], bigvec(&[1]))
            .expect("Z/n is a ring")
    }

    pub fn f2() -> Self {
        Self::cyclic(2)
    }

    /// `F_4 = F_2[x]/(x^2 + x + 1)` on generators `1, x`.
    pub fn f4() -> Self {
        Self::with_trivial_involution(
            FgAbGroup::from_orders(&[2, 2]),
            vec!["1".into(), "x".into()],
            vec![vec![bigvec(&[1, 0]), bigvec(&[0, 1])], vec![bigvec(&[0, 1]), bigvec(&[1, 1])]],
            bigvec(&[1, 0]),
        )
        .expect("F4 is a ring")
    }

    /// `F_2[t]/(t^2)` on generators `1, t`.
    pub fn f2_dual() -> Self {
        Self::with_trivial_involution(
            FgAbGroup::from_orders(&[2, 2]),
            vec!["1".into(), "t".into()],
            vec![vec![bigvec(&[1, 0]), bigvec(&[0, 1])], vec![bigvec(&[0, 1]), bigvec(&[0, 0])]],
            bigvec(&[1, 0]),
        )
        .expect("F2[t]/t^2 is a ring")
    }

    /// `Z[i]` with complex conjugation.
    pub fn gaussian() -> Self {
        Self::new(
            FgAbGroup::free(2),
            vec!["1".into(), "i".into()],
            vec![vec![bigvec(&[1, 0]), bigvec(&[0, 1])], vec![bigvec(&[0, 1]), bigvec(&[-1, 0])]],
            bigvec(&[1, 0]),
            IntMatrix::diagonal(&[1, -1]),
        )
        .expect("Z[i] is a ring")
    }

    /// `Z/n[t]/(t^2)` with trivial involution.
    pub fn dual_numbers(n: u64) -> Self {
        Self::with_trivial_involution(
            FgAbGroup::from_orders(&[n, n]),
            vec!["1".into(), "t".into()],
            vec![vec![bigvec(&[1, 0]), bigvec(&[0, 1])], vec![bigvec(&[0, 1]), bigvec(&[0, 0])]],
            bigvec(&[1, 0]),
        )
        .expect("dual numbers form a ring")
    }

    /// `R x S` with componentwise structure.
    pub fn product(&self, other: &InvolutiveRing) -> InvolutiveRing {
        let (n, m) = (self.n_gens(), other.n_gens());
        let add = FgAbGroup::direct_sum(&[&self.add, &other.add]);
        let names = self
            .names
            .iter()
            .map(|s| format!("({s},0)"))
            .chain(other.names.iter().map(|s| format!("(0,{s})")))
            .collect();
        let mut table = vec![vec![vec![BigInt::zero(); n + m]; n + m]; n + m];
        for i in 0..n + m {
            for j in 0..n + m {
                if i < n && j < n {
                    table[i][j][..n].clone_from_slice(&self.table[i][j]);
                } else if i >= n && j >= n {
                    table[i][j][n..].clone_from_slice(&other.table[i - n][j - n]);
                }
            }
        }
        let one = self.one.iter().chain(&other.one).cloned().collect();
        let w = self.w.matrix().block_diag(other.w.matrix());
        InvolutiveRing::new(add, names, table, one, w).expect("products of rings are rings")
    }
}

/// A ring homomorphism, given on additive generators.
#[derive(Clone, Debug)]
pub struct RingHom {
    source: InvolutiveRing,
    target: InvolutiveRing,
    map: GroupHom,
}

impl RingHom {
    /// Checks additivity, multiplicativity, the unit and compatibility with the involutions.
    pub fn new(source: InvolutiveRing, target: InvolutiveRing, matrix: IntMatrix) -> Result<Self> {
        let map = GroupHom::new(source.add.clone(), target.add.clone(), matrix)?;
        let t = &target.add;
        if !t.elements_equal(&map.apply(&source.one), &target.one) {
            return Err(Error::IllDefined("ring map does not preserve the unit".into()));
        }
        for i in 0..source.n_gens() {
            let gi = source.add.generator(i);
            for j in 0..source.n_gens() {
                let gj = source.add.generator(j);
                let lhs = map.apply(&source.mul(&gi, &gj));
                let rhs = target.mul(&map.apply(&gi), &map.apply(&gj));
                if !t.elements_equal(&lhs, &rhs) {
                    return Err(Error::IllDefined(format!(
                        "ring map is not multiplicative on {}*{}",
                        source.names[i], source.names[j]
                    )));
                }
            }
            if !t.elements_equal(&map.apply(&source.w.apply(&gi)), &target.w.apply(&map.apply(&gi))) {
                return Err(Error::IllDefined(format!("ring map does not commute with the involution on {}", source.names[i])));
            }
        }
        Ok(RingHom { source, target, map })
    }

    pub fn identity(r: &InvolutiveRing) -> Self {
        RingHom { source: r.clone(), target: r.clone(), map: GroupHom::identity(&r.add) }
    }

    pub fn source(&self) -> &InvolutiveRing {
        &self.source
    }

    pub fn target(&self) -> &InvolutiveRing {
        &self.target
    }

    pub fn additive(&self) -> &GroupHom {
        &self.map
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.map.apply(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All elements of a finite ring paired with a brute-force check of every axiom.
    fn brute_force_axioms(r: &InvolutiveRing) -> bool {
        let a = r.additive();
        let els = a.elements().unwrap();
        let eq = |x: &[BigInt], y: &[BigInt]| a.elements_equal(x, y);
        let add = |x: &[BigInt], y: &[BigInt]| -> Vec<BigInt> { x.iter().zip(y).map(|(p, q)| p + q).collect() };
        for x in &els {
            if !eq(&r.mul(r.one(), x), x) {
                return false;
            }
            for y in &els {
                if !eq(&r.mul(x, y), &r.mul(y, x)) {
                    return false;
                }
                for z in &els {
                    if !eq(&r.mul(&r.mul(x, y), z), &r.mul(x, &r.mul(y, z))) {
                        return false;
                    }
                    if !eq(&r.mul(x, &add(y, z)), &add(&r.mul(x, y), &r.mul(x, z))) {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn standard_rings_are_valid() {
        assert!(InvolutiveRing::integers().has_trivial_involution());
        let zi = InvolutiveRing::gaussian();
        assert!(!zi.has_trivial_involution());
        let ww = zi.involution().then(zi.involution()).unwrap();
        assert!(ww.equals(&GroupHom::identity(zi.additive())));
        assert!(brute_force_axioms(&InvolutiveRing::f2_dual()));
        assert!(brute_force_axioms(&InvolutiveRing::f4()));
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // 1*x = 0, so the unit is not neutral.
        let bad = InvolutiveRing::with_trivial_involution(
            FgAbGroup::from_orders(&[2, 2]),
            vec!["1".into(), "x".into()],
            vec![vec![bigvec(&[1, 0]), bigvec(&[0, 0])], vec![bigvec(&[0, 0]), bigvec(&[1, 1])]],
            bigvec(&[1, 0]),
        );
        assert!(matches!(bad, Err(Error::RingAxiom(_))));
        // x*x = y, y*y = x, x*y = 0: (x*x)*y = x but x*(x*y) = 0.
        let t = |v: &[i64]| bigvec(v);
        let table = vec![
            vec![t(&[1, 0, 0]), t(&[0, 1, 0]), t(&[0, 0, 1])],
            vec![t(&[0, 1, 0]), t(&[0, 0, 1]), t(&[0, 0, 0])],
            vec![t(&[0, 0, 1]), t(&[0, 0, 0]), t(&[0, 1, 0])],
        ];
        let bad = InvolutiveRing::with_trivial_involution(
            FgAbGroup::from_orders(&[2, 2, 2]),
            vec!["1".into(), "x".into(), "y".into()],
            table,
            t(&[1, 0, 0]),
        );
        assert!(matches!(bad, Err(Error::RingAxiom(m)) if m.contains("associative")));
    }

    #[test]
    fn involution_checks() {
        let table = vec![vec![bigvec(&[1, 0]), bigvec(&[0, 1])], vec![bigvec(&[0, 1]), bigvec(&[-1, 0])]];
        let names = vec!["1".to_string(), "i".to_string()];
        let not_order_two = InvolutiveRing::new(
            FgAbGroup::free(2),
            names.clone(),
            table.clone(),
            bigvec(&[1, 0]),
            IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]),
        );
        assert!(matches!(not_order_two, Err(Error::RingAxiom(_))));
        let not_multiplicative =
            InvolutiveRing::new(FgAbGroup::free(2), names, table, bigvec(&[1, 0]), IntMatrix::diagonal(&[-1, 1]));
        assert!(matches!(not_multiplicative, Err(Error::RingAxiom(_))));
    }

    #[test]
    fn frobenius_examples() {
        let z2 = InvolutiveRing::integers().mod2();
        let phi = z2.frobenius().unwrap();
        assert!(phi.equals(&GroupHom::identity(z2.additive())));
        assert_eq!(z2.additive().order(), Some(BigInt::from(2)));

        let f4 = InvolutiveRing::f4();
        let phi = f4.frobenius().unwrap();
        assert!(phi.is_surjective());
        assert!(!phi.equals(&GroupHom::identity(f4.additive())));

        let d = InvolutiveRing::f2_dual();
        let phi = d.frobenius().unwrap();
        assert!(!phi.is_surjective());
        // Oracle: (a + b t)^2 = a^2 = a over F2.
        for a in 0..2 {
            for b in 0..2 {
                let x = bigvec(&[a, b]);
                assert!(d.additive().elements_equal(&phi.apply(&x), &bigvec(&[a, 0])));
            }
        }
        assert!(InvolutiveRing::integers().frobenius().is_err());
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative_exhaustively() {
        for r in [InvolutiveRing::f4(), InvolutiveRing::f2_dual(), InvolutiveRing::cyclic(4).mod2()] {
            let phi = r.frobenius().unwrap();
            let a = r.additive();
            let els = a.elements().unwrap();
            for x in &els {
                for y in &els {
                    let s: Vec<BigInt> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                    let lhs = r.square(&s);
                    let rhs: Vec<BigInt> = phi.apply(x).iter().zip(phi.apply(y)).map(|(p, q)| p + q).collect();
                    assert!(a.elements_equal(&lhs, &rhs));
                    assert!(a.elements_equal(&r.square(&r.mul(x, y)), &r.mul(&phi.apply(x), &phi.apply(y))));
                }
            }
        }
    }

    #[test]
    fn ring_hom_checks() {
        let f2 = InvolutiveRing::f2();
        let f4 = InvolutiveRing::f4();
        assert!(RingHom::new(f2.clone(), f4.clone(), IntMatrix::from_rows(&[vec![1], vec![0]])).is_ok());
        assert!(RingHom::new(f2, f4, IntMatrix::from_rows(&[vec![0], vec![1]])).is_err());
    }
}
