//! Integer linear algebra for finitely generated abelian groups:
//! matrices over Z, Smith normal form with unimodular transforms,
//! lattice membership, kernels, quotients of lattices, and cohomology
//! of complexes of presented groups.

/// A dense integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out
                        .get(i, j)
                        .checked_add(a.checked_mul(other.get(k, j)).expect("overflow"))
                        .expect("overflow");
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn neg(&self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| -v).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        self.get(i, j)
                            .checked_mul(x[j])
                            .expect("overflow")
                    })
                    .try_fold(0i64, |acc, v| acc.checked_add(v))
                    .expect("overflow")
            })
            .collect()
    }
}

/// U · A · V = D with D diagonal (d_1 | d_2 | …, all ≥ 0) and U, V
/// unimodular; the inverses are carried along and re-verified.
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: Mat,
    pub u: Mat,
    pub v: Mat,
    pub u_inv: Mat,
    pub v_inv: Mat,
}

impl Snf {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        (0..self.d.rows.min(self.d.cols))
            .filter(|&i| self.d.get(i, i) != 0)
            .count()
    }
}

pub fn smith_normal_form(a: &Mat) -> Snf {
    let mut d = a.clone();
    let mut u = Mat::identity(a.rows);
    let mut u_inv = Mat::identity(a.rows);
    let mut v = Mat::identity(a.cols);
    let mut v_inv = Mat::identity(a.cols);

    // row ops act on d and u on the left; the inverse op is applied to
    // u_inv on the right. Column ops act on d and v on the right; the
    // inverse op applies to v_inv on the left.
    fn swap_rows(m: &mut Mat, i: usize, j: usize) {
        for k in 0..m.cols {
            let t = m.get(i, k);
            m.set(i, k, m.get(j, k));
            m.set(j, k, t);
        }
    }
    fn swap_cols(m: &mut Mat, i: usize, j: usize) {
        for k in 0..m.rows {
            let t = m.get(k, i);
            m.set(k, i, m.get(k, j));
            m.set(k, j, t);
        }
    }
    fn add_row(m: &mut Mat, dst: usize, src: usize, c: i64) {
        for k in 0..m.cols {
            let v = m
                .get(dst, k)
                .checked_add(c.checked_mul(m.get(src, k)).expect("overflow"))
                .expect("overflow");
            m.set(dst, k, v);
        }
    }
    fn add_col(m: &mut Mat, dst: usize, src: usize, c: i64) {
        for k in 0..m.rows {
            let v = m
                .get(k, dst)
                .checked_add(c.checked_mul(m.get(k, src)).expect("overflow"))
                .expect("overflow");
            m.set(k, dst, v);
        }
    }
    fn neg_row(m: &mut Mat, i: usize) {
        for k in 0..m.cols {
            let v = m.get(i, k);
            m.set(i, k, -v);
        }
    }
    fn neg_col(m: &mut Mat, i: usize) {
        for k in 0..m.rows {
            let v = m.get(k, i);
            m.set(k, i, -v);
        }
    }

    let n = d.rows.min(d.cols);
    let mut t = 0;
    while t < n {
        // find a pivot: nonzero entry in the submatrix from (t, t)
        let mut pivot = None;
        'find: for i in t..d.rows {
            for j in t..d.cols {
                if d.get(i, j) != 0 {
                    pivot = Some((i, j));
                    break 'find;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            swap_rows(&mut d, t, pi);
            swap_rows(&mut u, t, pi);
            swap_cols(&mut u_inv, t, pi);
        }
        if pj != t {
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
            swap_rows(&mut v_inv, t, pj);
        }
        loop {
            // clear column t below the pivot
            let mut dirty = false;
            for i in (t + 1)..d.rows {
                let a = d.get(i, t);
                if a == 0 {
                    continue;
                }
                let p = d.get(t, t);
                let q = a.div_euclid(p);
                add_row(&mut d, i, t, -q);
                add_row(&mut u, i, t, -q);
                add_col(&mut u_inv, t, i, q);
                if d.get(i, t) != 0 {
                    // remainder nonzero: swap to shrink the pivot
                    swap_rows(&mut d, t, i);
                    swap_rows(&mut u, t, i);
                    swap_cols(&mut u_inv, t, i);
                    dirty = true;
                }
            }
            for j in (t + 1)..d.cols {
                let a = d.get(t, j);
                if a == 0 {
                    continue;
                }
                let p = d.get(t, t);
                let q = a.div_euclid(p);
                add_col(&mut d, j, t, -q);
                add_col(&mut v, j, t, -q);
                add_row(&mut v_inv, t, j, q);
                if d.get(t, j) != 0 {
                    swap_cols(&mut d, t, j);
                    swap_cols(&mut v, t, j);
                    swap_rows(&mut v_inv, t, j);
                    dirty = true;
                }
            }
            if !dirty
                && (t + 1..d.rows).all(|i| d.get(i, t) == 0)
                && (t + 1..d.cols).all(|j| d.get(t, j) == 0)
            {
                break;
            }
        }
        // divisibility: make d[t][t] divide every later entry
        let p = d.get(t, t);
        if p < 0 {
            neg_row(&mut d, t);
            neg_row(&mut u, t);
            neg_col(&mut u_inv, t);
        }
        let p = d.get(t, t);
        let mut bad = None;
        'divcheck: for i in (t + 1)..d.rows {
            for j in (t + 1)..d.cols {
                if d.get(i, j) % p != 0 {
                    bad = Some(i);
                    break 'divcheck;
                }
            }
        }
        if let Some(i) = bad {
            // add the offending row to row t and redo this pivot
            add_row(&mut d, t, i, 1);
            add_row(&mut u, t, i, 1);
            add_col(&mut u_inv, i, t, -1);
            continue;
        }
        t += 1;
    }
    // normalize signs of any remaining negative diagonal entries
    for i in 0..n {
        if d.get(i, i) < 0 {
            neg_row(&mut d, i);
            neg_row(&mut u, i);
            neg_col(&mut u_inv, i);
        }
    }
    let _ = neg_col;
    let snf = Snf {
        d,
        u,
        v,
        u_inv,
        v_inv,
    };
    debug_assert!(snf.u.mul(a).mul(&snf.v) == snf.d);
    debug_assert!(snf.u.mul(&snf.u_inv) == Mat::identity(a.rows));
    debug_assert!(snf.v.mul(&snf.v_inv) == Mat::identity(a.cols));
    snf
}

/// Solves A x = b over Z if possible.
pub fn solve(a: &Mat, b: &[i64], snf: &Snf) -> Option<Vec<i64>> {
    assert_eq!(a.rows, b.len());
    let c = snf.u.apply(b);
    let n = a.rows.min(a.cols);
    let mut y = vec![0i64; a.cols];
    for i in 0..a.rows {
        let di = if i < n { snf.d.get(i, i) } else { 0 };
        if di == 0 {
            if c[i] != 0 {
                return None;
            }
        } else {
            if c[i] % di != 0 {
                return None;
            }
            y[i] = c[i] / di;
        }
    }
    Some(snf.v.apply(&y))
}

/// A matrix whose columns are a basis of ker(A) ⊆ Z^cols.
pub fn kernel(a: &Mat, snf: &Snf) -> Mat {
    let r = snf.rank();
    let mut out = Mat::zero(a.cols, a.cols - r);
    for (k, j) in (r..a.cols).enumerate() {
        for i in 0..a.cols {
            out.set(i, k, snf.v.get(i, j));
        }
    }
    out
}

/// A matrix whose columns are a basis of the column space (image
/// lattice) of A: the nonzero columns of U⁻¹ · D.
pub fn image_basis(a: &Mat, snf: &Snf) -> Mat {
    let r = snf.rank();
    let mut out = Mat::zero(a.rows, r);
    for j in 0..r {
        let dj = snf.d.get(j, j);
        for i in 0..a.rows {
            out.set(i, j, snf.u_inv.get(i, j).checked_mul(dj).expect("overflow"));
        }
    }
    out
}

/// A finitely generated abelian group: Z^rank ⊕ ⊕_k Z/torsion[k] with
/// invariant factors 1 < t_1 | t_2 | ….
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgAbGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl FgAbGroup {
    pub fn zero() -> FgAbGroup {
        FgAbGroup {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> FgAbGroup {
        FgAbGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for &t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Z^g / im(R) for a relation matrix R with g rows.
pub fn cokernel(r: &Mat) -> FgAbGroup {
    let snf = smith_normal_form(r);
    let n = r.rows.min(r.cols);
    let mut torsion = Vec::new();
    let mut nonzero = 0;
    for i in 0..n {
        let d = snf.d.get(i, i);
        if d != 0 {
            nonzero += 1;
            if d > 1 {
                torsion.push(d as u64);
            }
        }
    }
    FgAbGroup {
        rank: r.rows - nonzero,
        torsion,
    }
}

/// (im G)/(im R) where im R ⊆ im G, both given by generating (not
/// necessarily independent) columns inside the same ambient Z^m.
pub fn quotient_lattice(g: &Mat, r: &Mat) -> FgAbGroup {
    assert_eq!(g.rows, r.rows, "ambient mismatch");
    let snf_g = smith_normal_form(g);
    let basis = image_basis(g, &snf_g);
    let snf_b = smith_normal_form(&basis);
    let mut coords = Mat::zero(basis.cols, r.cols);
    for j in 0..r.cols {
        let col = r.column(j);
        let x = solve(&basis, &col, &snf_b).expect("relations must lie in the generator lattice");
        for i in 0..basis.cols {
            coords.set(i, j, x[i]);
        }
    }
    cokernel(&coords)
}

/// A subquotient L/B of an ambient Z^m (L the lattice spanned by the
/// columns of `cocycles`, B by those of `boundaries`, with B ⊆ L),
/// presented in invariant-factor form with explicit ambient
/// representatives for the generators and a coordinate map back.
#[derive(Debug, Clone)]
pub struct Subquotient {
    pub group: FgAbGroup,
    /// reps: ambient × gens(group); column j represents generator j.
    pub reps: Mat,
    basis: Mat,
    basis_snf: Snf,
    project: Mat,
}

pub fn subquotient(cocycles: &Mat, boundaries: &Mat) -> Subquotient {
    assert_eq!(cocycles.rows, boundaries.rows, "ambient mismatch");
    let basis = image_basis(cocycles, &smith_normal_form(cocycles));
    let basis_snf = smith_normal_form(&basis);
    let mut rel = Mat::zero(basis.cols, boundaries.cols);
    for j in 0..boundaries.cols {
        let sol = solve(&basis, &boundaries.column(j), &basis_snf)
            .expect("boundaries must lie in the cocycle lattice");
        for i in 0..basis.cols {
            rel.set(i, j, sol[i]);
        }
    }
    let nf = normal_form(basis.cols, &rel);
    let reps = basis.mul(&nf.lift);
    Subquotient {
        group: nf.group,
        reps,
        basis,
        basis_snf,
        project: nf.project,
    }
}

impl Subquotient {
    /// Coordinates of an ambient element of the cocycle lattice in the
    /// generators of the subquotient (valid modulo torsion). None if
    /// the element is not a cocycle.
    pub fn express(&self, x: &[i64]) -> Option<Vec<i64>> {
        let c = solve(&self.basis, x, &self.basis_snf)?;
        Some(self.project.apply(&c))
    }
}

/// Z^g / im(R) put into invariant-factor form, together with the change
/// of coordinates: `project` maps old generator coordinates to the new
/// ones, `lift` is a section (project ∘ lift = id on the nose, and
/// lift ∘ project ≡ id modulo im R).
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub group: FgAbGroup,
    pub project: Mat,
    pub lift: Mat,
}

pub fn normal_form(g: usize, r: &Mat) -> NormalForm {
    assert_eq!(r.rows, g);
    let snf = smith_normal_form(r);
    // In coordinates y = U x the relation lattice is spanned by the
    // diagonal D: row i carries the relation d_i · y_i (d_i = 0 for
    // i beyond the rank: no relation, a free coordinate).
    let n = g.min(r.cols);
    let diag = |i: usize| if i < n { snf.d.get(i, i) } else { 0 };
    let mut keep: Vec<usize> = (0..g).filter(|&i| diag(i) == 0).collect();
    let mut torsion = Vec::new();
    for i in 0..g {
        let d = diag(i);
        if d > 1 {
            keep.push(i);
            torsion.push(d as u64);
        }
    }
    let rank = keep.len() - torsion.len();
    let mut project = Mat::zero(keep.len(), g);
    let mut lift = Mat::zero(g, keep.len());
    for (new, &old) in keep.iter().enumerate() {
        for j in 0..g {
            project.set(new, j, snf.u.get(old, j));
            lift.set(j, new, snf.u_inv.get(j, old));
        }
    }
    NormalForm {
        group: FgAbGroup { rank, torsion },
        project,
        lift,
    }
}

/// A complex of presented abelian groups: C^n = Z^{gens[n]} / im(rels[n])
/// with differentials diff[n]: Z^{gens[n]} → Z^{gens[n+1]} descending to
/// the quotients. Indices run 0..gens.len(); diff has one entry fewer.
#[derive(Debug, Clone)]
pub struct PresentedComplex {
    pub gens: Vec<usize>,
    pub rels: Vec<Mat>,
    pub diff: Vec<Mat>,
}

impl PresentedComplex {
    /// Checks shapes, that differentials descend (d · R ⊆ im R') and
    /// that d ∘ d = 0 in the quotients.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.gens.len();
        if self.rels.len() != n || self.diff.len() + 1 != n.max(1) {
            return Err("length mismatch".into());
        }
        for (i, r) in self.rels.iter().enumerate() {
            if r.rows != self.gens[i] {
                return Err(format!("relations at {i} have wrong ambient rank"));
            }
        }
        for (i, d) in self.diff.iter().enumerate() {
            if d.cols != self.gens[i] || d.rows != self.gens[i + 1] {
                return Err(format!("differential at {i} has wrong shape"));
            }
            // descends: d · R_i ⊆ im R_{i+1}
            let dr = d.mul(&self.rels[i]);
            let snf = smith_normal_form(&self.rels[i + 1]);
            for j in 0..dr.cols {
                if solve(&self.rels[i + 1], &dr.column(j), &snf).is_none() {
                    return Err(format!("differential at {i} does not descend"));
                }
            }
        }
        for i in 0..self.diff.len().saturating_sub(1) {
            let dd = self.diff[i + 1].mul(&self.diff[i]);
            let snf = smith_normal_form(&self.rels[i + 2]);
            for j in 0..dd.cols {
                if solve(&self.rels[i + 2], &dd.column(j), &snf).is_none() {
                    return Err(format!("d∘d ≠ 0 in the quotient at {i}"));
                }
            }
        }
        Ok(())
    }

    /// H^n = {x : d_n x ∈ im R_{n+1}} / (im d_{n-1} + im R_n), with
    /// explicit cocycle representatives for the generators.
    pub fn cohomology_with_reps(&self, n: usize) -> Subquotient {
        let g = self.gens[n];
        // cocycle lattice
        let cocycles = if n + 1 < self.gens.len() {
            let block = self.diff[n].hcat(&self.rels[n + 1].neg());
            let snf = smith_normal_form(&block);
            let k = kernel(&block, &snf);
            // top g rows of the kernel basis generate the x-parts
            let mut top = Mat::zero(g, k.cols);
            for i in 0..g {
                for j in 0..k.cols {
                    top.set(i, j, k.get(i, j));
                }
            }
            top
        } else {
            Mat::identity(g)
        };
        let boundaries = if n > 0 {
            self.diff[n - 1].hcat(&self.rels[n])
        } else {
            self.rels[n].clone()
        };
        subquotient(&cocycles, &boundaries)
    }

    pub fn cohomology(&self, n: usize) -> FgAbGroup {
        self.cohomology_with_reps(n).group
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn snf_small_example() {
        let a = Mat::from_rows(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d);
        assert_eq!(snf.d.get(0, 0), 2);
        assert_eq!(snf.d.get(1, 1), 2);
        assert_eq!(snf.d.get(2, 2), 156);
    }

    #[test]
    fn cokernel_examples() {
        // Z^2 / im[[2,0],[0,3]] = Z/6 in invariant-factor form? No:
        // diag(2,3) has SNF diag(1,6), so the cokernel is Z/6.
        let r = Mat::from_rows(vec![vec![2, 0], vec![0, 3]]);
        assert_eq!(
            cokernel(&r),
            FgAbGroup {
                rank: 0,
                torsion: vec![6]
            }
        );
        let r = Mat::from_rows(vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(
            cokernel(&r),
            FgAbGroup {
                rank: 0,
                torsion: vec![2, 2]
            }
        );
        let r = Mat::zero(3, 1);
        assert_eq!(cokernel(&r), FgAbGroup::free(3));
    }

    #[test]
    fn solve_and_kernel() {
        let a = Mat::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6]]);
        let snf = smith_normal_form(&a);
        let x = solve(&a, &[6, 15], &snf).unwrap();
        assert_eq!(a.apply(&x), vec![6, 15]);
        assert!(solve(&a, &[1, 1], &snf).is_some());
        let k = kernel(&a, &snf);
        assert_eq!(k.cols, 1);
        assert_eq!(a.mul(&k).is_zero(), true);
        // the kernel is spanned by (1, -2, 1)
        let col = k.column(0);
        assert_eq!(col.iter().map(|v| v.abs()).collect::<Vec<_>>(), vec![1, 2, 1]);
    }

    #[test]
    fn circle_complex_by_hand() {
        // simplicial circle: 2 vertices, 2 edges; free complex
        // 0 → Z^2 → Z^2 → 0 with d = [[1,-1],[1,-1]]... transposed for
        // cochains: C^0 = Z^2 (vertices), C^1 = Z^2 (edges),
        // d(f)(e) = f(head) − f(tail); both edges run between the two
        // vertices, giving the cochain matrix [[-1, 1], [-1, 1]]:
        // H^0 = Z, H^1 = Z.
        let cx = PresentedComplex {
            gens: vec![2, 2],
            rels: vec![Mat::zero(2, 0), Mat::zero(2, 0)],
            diff: vec![Mat::from_rows(vec![vec![-1, 1], vec![-1, 1]])],
        };
        cx.validate().unwrap();
        assert_eq!(cx.cohomology(0), FgAbGroup::free(1));
        assert_eq!(cx.cohomology(1), FgAbGroup::free(1));
    }

    #[test]
    fn torsion_cohomology() {
        // 0 → Z --2--> Z → 0: H^0 = 0, H^1 = Z/2
        let cx = PresentedComplex {
            gens: vec![1, 1],
            rels: vec![Mat::zero(1, 0), Mat::zero(1, 0)],
            diff: vec![Mat::from_rows(vec![vec![2]])],
        };
        cx.validate().unwrap();
        assert_eq!(cx.cohomology(0), FgAbGroup::zero());
        assert_eq!(
            cx.cohomology(1),
            FgAbGroup {
                rank: 0,
                torsion: vec![2]
            }
        );
    }

    proptest! {
        #[test]
        fn snf_random(rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut a = Mat::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    a.set(i, j, rng.gen_range(-9i64..=9));
                }
            }
            let snf = smith_normal_form(&a);
            prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d.clone());
            prop_assert_eq!(snf.u.mul(&snf.u_inv), Mat::identity(rows));
            prop_assert_eq!(snf.u_inv.mul(&snf.u), Mat::identity(rows));
            prop_assert_eq!(snf.v.mul(&snf.v_inv), Mat::identity(cols));
            // diagonal, nonnegative, divisibility chain
            for i in 0..rows {
                for j in 0..cols {
                    if i != j {
                        prop_assert_eq!(snf.d.get(i, j), 0);
                    }
                }
            }
            let n = rows.min(cols);
            for i in 0..n {
                prop_assert!(snf.d.get(i, i) >= 0);
                if i + 1 < n && snf.d.get(i + 1, i + 1) != 0 {
                    prop_assert!(snf.d.get(i, i) != 0);
                    prop_assert_eq!(snf.d.get(i + 1, i + 1) % snf.d.get(i, i), 0);
                }
            }
        }

        #[test]
        fn solve_random(rows in 1usize..4, cols in 1usize..4, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut a = Mat::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    a.set(i, j, rng.gen_range(-5i64..=5));
                }
            }
            let x: Vec<i64> = (0..cols).map(|_| rng.gen_range(-5i64..=5)).collect();
            let b = a.apply(&x);
            let snf = smith_normal_form(&a);
            let sol = solve(&a, &b, &snf).expect("solvable by construction");
            prop_assert_eq!(a.apply(&sol), b);
        }
    }
}
