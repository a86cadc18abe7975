//! Abelian-group-valued presheaves on a finite site. Values are
//! finitely generated abelian groups in invariant-factor form; the
//! value at U is presented as Z^{gens} modulo the diagonal torsion
//! relations, and restrictions are integer matrices on generators,
//! well defined modulo those relations.

use crate::abelian::{
    cokernel, image_basis, kernel, normal_form, quotient_lattice, smith_normal_form, solve,
    FgAbGroup, Mat,
};
use crate::fincat::{FiniteCategory, MorId, ObjId};
use crate::presheaf::SetPresheaf;
use crate::topology::Topology;

/// Number of generators in the standard presentation of G.
pub fn gens_of(g: &FgAbGroup) -> usize {
    g.rank + g.torsion.len()
}

/// The standard relation matrix of G: one column t_k · e_{rank+k} per
/// invariant factor.
pub fn relations_of(g: &FgAbGroup) -> Mat {
    let n = gens_of(g);
    let mut r = Mat::zero(n, g.torsion.len());
    for (k, &t) in g.torsion.iter().enumerate() {
        r.set(g.rank + k, k, t as i64);
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbPresheaf {
    pub groups: Vec<FgAbGroup>,
    /// restrict[m]: generators of F(dst m) → generators of F(src m).
    pub restrict: Vec<Mat>,
}

/// A morphism of abelian presheaves: a matrix on generators per object.
pub type AbMorphism = Vec<Mat>;

/// Does `m · x ∈ im [cols]` have a solution for every column x of `a`?
fn columns_in_image(a: &Mat, cols: &Mat) -> bool {
    let snf = smith_normal_form(cols);
    (0..a.cols).all(|j| solve(cols, &a.column(j), &snf).is_some())
}

/// a ≡ b modulo a relation lattice (columnwise).
fn eq_mod(a: &Mat, b: &Mat, rel: &Mat) -> bool {
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.cols, b.cols);
    let mut diff = a.clone();
    for i in 0..a.rows {
        for j in 0..a.cols {
            diff.set(i, j, a.get(i, j) - b.get(i, j));
        }
    }
    columns_in_image(&diff, rel)
}

impl AbPresheaf {
    pub fn group(&self, u: ObjId) -> &FgAbGroup {
        &self.groups[u.0]
    }

    pub fn res(&self, m: MorId) -> &Mat {
        &self.restrict[m.0]
    }

    /// The constant presheaf at G (identity restrictions).
    pub fn constant(cat: &FiniteCategory, g: FgAbGroup) -> AbPresheaf {
        let n = gens_of(&g);
        AbPresheaf {
            groups: vec![g; cat.object_count()],
            restrict: vec![Mat::identity(n); cat.morphism_count()],
        }
    }

    pub fn zero(cat: &FiniteCategory) -> AbPresheaf {
        AbPresheaf::constant(cat, FgAbGroup::zero())
    }

    /// Shape, well-definedness modulo relations, identity and
    /// functoriality laws modulo relations.
    pub fn validate(&self, cat: &FiniteCategory) -> Result<(), String> {
        if self.groups.len() != cat.object_count() || self.restrict.len() != cat.morphism_count() {
            return Err("abelian presheaf data has the wrong shape".into());
        }
        for m in cat.morphisms() {
            let src = &self.groups[cat.src(m).0];
            let dst = &self.groups[cat.dst(m).0];
            let mat = &self.restrict[m.0];
            if mat.rows != gens_of(src) || mat.cols != gens_of(dst) {
                return Err(format!(
                    "restriction along `{}` has the wrong shape",
                    cat.morphism_name(m)
                ));
            }
            // relations map into relations
            if !columns_in_image(&mat.mul(&relations_of(dst)), &relations_of(src)) {
                return Err(format!(
                    "restriction along `{}` is not well defined on torsion",
                    cat.morphism_name(m)
                ));
            }
        }
        for x in cat.objects() {
            let id = cat.identity(x);
            let n = gens_of(&self.groups[x.0]);
            if !eq_mod(
                &self.restrict[id.0],
                &Mat::identity(n),
                &relations_of(&self.groups[x.0]),
            ) {
                return Err(format!(
                    "identity of `{}` does not act as the identity",
                    cat.object_name(x)
                ));
            }
        }
        for g in cat.morphisms() {
            for f in cat.morphisms() {
                if cat.dst(f) != cat.src(g) {
                    continue;
                }
                let gf = cat.compose(g, f);
                let lhs = &self.restrict[gf.0];
                let rhs = self.restrict[f.0].mul(&self.restrict[g.0]);
                if !eq_mod(lhs, &rhs, &relations_of(&self.groups[cat.src(f).0])) {
                    return Err(format!(
                        "functoriality fails on `{}` ∘ `{}`",
                        cat.morphism_name(g),
                        cat.morphism_name(f)
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Is φ a natural map F → G (componentwise matrices on generators)?
pub fn is_natural_ab(
    cat: &FiniteCategory,
    phi: &AbMorphism,
    f: &AbPresheaf,
    g: &AbPresheaf,
) -> bool {
    if phi.len() != cat.object_count() {
        return false;
    }
    for x in cat.objects() {
        if phi[x.0].rows != gens_of(&g.groups[x.0]) || phi[x.0].cols != gens_of(&f.groups[x.0]) {
            return false;
        }
        if !columns_in_image(
            &phi[x.0].mul(&relations_of(&f.groups[x.0])),
            &relations_of(&g.groups[x.0]),
        ) {
            return false;
        }
    }
    for m in cat.morphisms() {
        let (u, v) = (cat.src(m), cat.dst(m));
        let lhs = phi[u.0].mul(f.res(m));
        let rhs = g.res(m).mul(&phi[v.0]);
        if !eq_mod(&lhs, &rhs, &relations_of(&g.groups[u.0])) {
            return false;
        }
    }
    true
}

/// The free abelian presheaf Z[F] on a set presheaf.
pub fn free_abelian(cat: &FiniteCategory, f: &SetPresheaf) -> AbPresheaf {
    let groups: Vec<FgAbGroup> = f.sizes.iter().map(|&n| FgAbGroup::free(n)).collect();
    let restrict = cat
        .morphisms()
        .map(|m| {
            let (u, v) = (cat.src(m), cat.dst(m));
            let mut mat = Mat::zero(f.sizes[u.0], f.sizes[v.0]);
            for x in 0..f.sizes[v.0] {
                mat.set(f.res(m, x), x, mat.get(f.res(m, x), x) + 1);
            }
            mat
        })
        .collect();
    AbPresheaf { groups, restrict }
}

/// Per-object data of the abelian plus construction at X: the members
/// of the minimum sieve with the generator offsets of the ambient
/// product, a basis of the matching lattice, and the normal form of
/// the quotient by the pointwise relations.
#[derive(Debug, Clone)]
struct PlusObj {
    members: Vec<MorId>,
    offsets: Vec<usize>,
    ambient: usize,
    basis: Mat,
    project: Mat,
    lift: Mat,
}

#[derive(Debug, Clone)]
pub struct AbSheafification {
    pub presheaf: AbPresheaf,
    /// unit[x]: generators of F(x) → generators of aF(x).
    pub unit: AbMorphism,
}

/// One abelian plus construction: F⁺(X) is the group of matching
/// families of F over R_min(X), presented by a basis of the lattice
/// {x ∈ ⊕_f Z^{gens} : all compatibilities hold modulo torsion} divided
/// by the pointwise relations.
pub fn ab_plus(cat: &FiniteCategory, top: &Topology, f: &AbPresheaf) -> AbSheafification {
    let mut objs: Vec<PlusObj> = Vec::with_capacity(cat.object_count());
    let mut groups = Vec::with_capacity(cat.object_count());
    for x in cat.objects() {
        let members: Vec<MorId> = top.min_covering_sieve(x).members.iter().copied().collect();
        let mut offsets = Vec::with_capacity(members.len());
        let mut ambient = 0;
        for &m in &members {
            offsets.push(ambient);
            ambient += gens_of(&f.groups[cat.src(m).0]);
        }
        // constraint matrix C and its relation lattice rel_b
        let mut c_rows: Vec<Vec<i64>> = Vec::new();
        let mut rel_b_blocks: Vec<FgAbGroup> = Vec::new();
        for (fi, &fm) in members.iter().enumerate() {
            for g in cat.morphisms_into(cat.src(fm)) {
                let fg = cat.compose(fm, g);
                let fgi = members
                    .iter()
                    .position(|&m| m == fg)
                    .expect("sieve closed under precomposition");
                let w = cat.src(g);
                let rows = gens_of(&f.groups[w.0]);
                let mg = f.res(g);
                for r in 0..rows {
                    let mut row = vec![0i64; ambient];
                    row[offsets[fgi] + r] += 1;
                    for cidx in 0..mg.cols {
                        row[offsets[fi] + cidx] -= mg.get(r, cidx);
                    }
                    c_rows.push(row);
                }
                rel_b_blocks.push(f.groups[w.0].clone());
            }
        }
        let total_rows = c_rows.len();
        let c = if total_rows == 0 {
            Mat::zero(0, ambient)
        } else {
            Mat::from_rows(c_rows)
        };
        // block-diagonal relation matrix on the constraint side
        let rel_cols: usize = rel_b_blocks.iter().map(|g| g.torsion.len()).sum();
        let mut rel_b = Mat::zero(total_rows, rel_cols);
        {
            let mut ro = 0;
            let mut co = 0;
            for gblk in &rel_b_blocks {
                let r = relations_of(gblk);
                for i in 0..r.rows {
                    for j in 0..r.cols {
                        rel_b.set(ro + i, co + j, r.get(i, j));
                    }
                }
                ro += gens_of(gblk);
                co += gblk.torsion.len();
            }
        }
        // lattice of matching families: x with Cx ∈ im rel_b
        let block = c.hcat(&rel_b.neg());
        let snf = smith_normal_form(&block);
        let k = kernel(&block, &snf);
        let mut gen_lat = Mat::zero(ambient, k.cols);
        for i in 0..ambient {
            for j in 0..k.cols {
                gen_lat.set(i, j, k.get(i, j));
            }
        }
        let basis = image_basis(&gen_lat, &smith_normal_form(&gen_lat));
        // pointwise relations, expressed in basis coordinates
        let rel_a_cols: usize = members
            .iter()
            .map(|&m| f.groups[cat.src(m).0].torsion.len())
            .sum();
        let mut rel_a = Mat::zero(ambient, rel_a_cols);
        {
            let mut co = 0;
            for (fi, &m) in members.iter().enumerate() {
                let r = relations_of(&f.groups[cat.src(m).0]);
                for i in 0..r.rows {
                    for j in 0..r.cols {
                        rel_a.set(offsets[fi] + i, co + j, r.get(i, j));
                    }
                }
                co += r.cols;
            }
        }
        let snf_basis = smith_normal_form(&basis);
        let mut rel_coords = Mat::zero(basis.cols, rel_a.cols);
        for j in 0..rel_a.cols {
            let sol = solve(&basis, &rel_a.column(j), &snf_basis)
                .expect("pointwise relations lie in the matching lattice");
            for i in 0..basis.cols {
                rel_coords.set(i, j, sol[i]);
            }
        }
        let nf = normal_form(basis.cols, &rel_coords);
        groups.push(nf.group.clone());
        objs.push(PlusObj {
            members,
            offsets,
            ambient,
            basis,
            project: nf.project,
            lift: nf.lift,
        });
    }

    // coordinates of an ambient column in the generators of F⁺(x)
    let to_gens = |o: &PlusObj, amb: &Mat| -> Mat {
        let snf_basis = smith_normal_form(&o.basis);
        let mut coords = Mat::zero(o.basis.cols, amb.cols);
        for j in 0..amb.cols {
            let sol = solve(&o.basis, &amb.column(j), &snf_basis)
                .expect("column lies in the matching lattice");
            for i in 0..o.basis.cols {
                coords.set(i, j, sol[i]);
            }
        }
        o.project.mul(&coords)
    };

    // restriction along m: V ⊇ family ↦ (a_{m∘g})_g at U
    let mut restrict = Vec::with_capacity(cat.morphism_count());
    for m in cat.morphisms() {
        let (u, v) = (cat.src(m), cat.dst(m));
        let (ou, ov) = (&objs[u.0], &objs[v.0]);
        // ambient representatives of the generators of F⁺(v)
        let reps_v = ov.basis.mul(&ov.lift);
        let mut amb_u = Mat::zero(ou.ambient, reps_v.cols);
        for (gi, &g) in ou.members.iter().enumerate() {
            let mg = cat.compose(m, g);
            let vi = ov
                .members
                .iter()
                .position(|&h| h == mg)
                .expect("stability axiom violated");
            let rows = gens_of(&f.groups[cat.src(g).0]);
            for r in 0..rows {
                for j in 0..reps_v.cols {
                    amb_u.set(ou.offsets[gi] + r, j, reps_v.get(ov.offsets[vi] + r, j));
                }
            }
        }
        restrict.push(to_gens(ou, &amb_u));
    }

    // unit: s ↦ (res_g s)_g
    let unit = cat
        .objects()
        .map(|x| {
            let o = &objs[x.0];
            let n = gens_of(&f.groups[x.0]);
            let mut amb = Mat::zero(o.ambient, n);
            for (gi, &g) in o.members.iter().enumerate() {
                let mg = f.res(g);
                for r in 0..mg.rows {
                    for j in 0..n {
                        amb.set(o.offsets[gi] + r, j, mg.get(r, j));
                    }
                }
            }
            to_gens(o, &amb)
        })
        .collect();

    AbSheafification {
        presheaf: AbPresheaf { groups, restrict },
        unit,
    }
}

/// Full abelian sheafification (plus construction twice).
pub fn ab_sheafify(cat: &FiniteCategory, top: &Topology, f: &AbPresheaf) -> AbSheafification {
    let p1 = ab_plus(cat, top, f);
    let p2 = ab_plus(cat, top, &p1.presheaf);
    let unit = cat
        .objects()
        .map(|x| p2.unit[x.0].mul(&p1.unit[x.0]))
        .collect();
    AbSheafification {
        presheaf: p2.presheaf,
        unit,
    }
}

/// Is the matrix m an isomorphism G → H of presented groups?
pub fn is_iso_mod(g: &FgAbGroup, h: &FgAbGroup, m: &Mat) -> bool {
    let rel_g = relations_of(g);
    let rel_h = relations_of(h);
    // surjective: Z^{gens h} / (im m + im rel_h) = 0
    if !cokernel(&m.hcat(&rel_h)).is_zero() {
        return false;
    }
    // injective: {x : m x ∈ im rel_h} / im rel_g = 0
    let block = m.hcat(&rel_h.neg());
    let snf = smith_normal_form(&block);
    let k = kernel(&block, &snf);
    let mut top = Mat::zero(gens_of(g), k.cols);
    for i in 0..top.rows {
        for j in 0..k.cols {
            top.set(i, j, k.get(i, j));
        }
    }
    quotient_lattice(&top, &rel_g).is_zero()
}

/// A generating set (columns) of the lattice {x : m·x ∈ im rel_dst}.
pub fn kernel_lattice(m: &Mat, rel_dst: &Mat) -> Mat {
    let block = m.hcat(&rel_dst.neg());
    let snf = smith_normal_form(&block);
    let k = kernel(&block, &snf);
    let mut top = Mat::zero(m.cols, k.cols);
    for i in 0..top.rows {
        for j in 0..k.cols {
            top.set(i, j, k.get(i, j));
        }
    }
    top
}

/// m: (Z^a/rel_src) → (Z^b/rel_dst) is injective.
pub fn is_injective_presented(rel_src: &Mat, m: &Mat, rel_dst: &Mat) -> bool {
    let ker = kernel_lattice(m, rel_dst);
    quotient_lattice(&ker, rel_src).is_zero()
}

/// m: _ → (Z^b/rel_dst) is surjective.
pub fn is_surjective_presented(m: &Mat, rel_dst: &Mat) -> bool {
    cokernel(&m.hcat(rel_dst)).is_zero()
}

/// Exactness of presented groups _ →f (Z^b/rel2) →g (Z^c/rel3) at the
/// middle: g∘f = 0 and ker g ⊆ im f (modulo relations).
pub fn is_exact_at_presented(f: &Mat, rel2: &Mat, g: &Mat, rel3: &Mat) -> bool {
    if !columns_in_image(&g.mul(f), rel3) {
        return false;
    }
    let ker = kernel_lattice(g, rel3);
    columns_in_image(&ker, &f.hcat(rel2))
}

/// Exactness of G₁ →f G₂ →g G₃ at G₂ for groups in invariant-factor
/// form: g∘f = 0 and ker g ⊆ im f (all modulo the torsion relations).
pub fn is_exact_at(g1: &FgAbGroup, f: &Mat, g2: &FgAbGroup, g: &Mat, g3: &FgAbGroup) -> bool {
    let _ = g1;
    is_exact_at_presented(f, &relations_of(g2), g, &relations_of(g3))
}

/// F is a sheaf of abelian groups iff the unit of a single plus
/// construction is an isomorphism at every object.
pub fn is_ab_sheaf(cat: &FiniteCategory, top: &Topology, f: &AbPresheaf) -> bool {
    let p = ab_plus(cat, top, f);
    cat.objects()
        .all(|x| is_iso_mod(&f.groups[x.0], &p.presheaf.groups[x.0], &p.unit[x.0]))
}

/// φ: F → G is locally surjective when for every X and every generator
/// t of G(X) the restriction of t along each member of R_min(X) lies in
/// the image of φ (plus torsion relations).
pub fn is_locally_surjective_ab(
    cat: &FiniteCategory,
    top: &Topology,
    phi: &AbMorphism,
    g: &AbPresheaf,
) -> bool {
    for x in cat.objects() {
        let n = gens_of(&g.groups[x.0]);
        for &m in &top.min_covering_sieve(x).members {
            let u = cat.src(m);
            let target = g.res(m).mul(&Mat::identity(n));
            let avail = phi[u.0].hcat(&relations_of(&g.groups[u.0]));
            if !columns_in_image(&target, &avail) {
                return false;
            }
        }
    }
    true
}

/// Checks that 0 → F₁ →α F₂ →β F₃ → 0 is a short exact sequence of
/// sheaves: α is injective objectwise, β∘α = 0, the kernel of β is
/// locally contained in the image of α, and β is locally surjective.
pub fn verify_short_exact_locally(
    cat: &FiniteCategory,
    top: &Topology,
    f1: &AbPresheaf,
    alpha: &AbMorphism,
    f2: &AbPresheaf,
    beta: &AbMorphism,
    f3: &AbPresheaf,
) -> Result<(), String> {
    if !is_natural_ab(cat, alpha, f1, f2) {
        return Err("α is not natural".into());
    }
    if !is_natural_ab(cat, beta, f2, f3) {
        return Err("β is not natural".into());
    }
    for x in cat.objects() {
        let name = cat.object_name(x);
        // α injective at x
        let rel1 = relations_of(&f1.groups[x.0]);
        let rel2 = relations_of(&f2.groups[x.0]);
        let rel3 = relations_of(&f3.groups[x.0]);
        let block = alpha[x.0].hcat(&rel2.neg());
        let snf = smith_normal_form(&block);
        let k = kernel(&block, &snf);
        let mut ker1 = Mat::zero(gens_of(&f1.groups[x.0]), k.cols);
        for i in 0..ker1.rows {
            for j in 0..k.cols {
                ker1.set(i, j, k.get(i, j));
            }
        }
        if !quotient_lattice(&ker1, &rel1).is_zero() {
            return Err(format!("α is not injective at `{name}`"));
        }
        // β ∘ α = 0
        let comp = beta[x.0].mul(&alpha[x.0]);
        if !columns_in_image(&comp, &rel3) {
            return Err(format!("β ∘ α ≠ 0 at `{name}`"));
        }
        // ker β locally contained in im α: compute a generating set of
        // {x : βx ∈ rel₃} and restrict along the minimum sieve
        let blockb = beta[x.0].hcat(&rel3.neg());
        let snfb = smith_normal_form(&blockb);
        let kb = kernel(&blockb, &snfb);
        let mut kerb = Mat::zero(gens_of(&f2.groups[x.0]), kb.cols);
        for i in 0..kerb.rows {
            for j in 0..kb.cols {
                kerb.set(i, j, kb.get(i, j));
            }
        }
        for &m in &top.min_covering_sieve(x).members {
            let u = cat.src(m);
            let restricted = f2.res(m).mul(&kerb);
            let avail = alpha[u.0].hcat(&relations_of(&f2.groups[u.0]));
            if !columns_in_image(&restricted, &avail) {
                return Err(format!(
                    "ker β ⊄ im α locally at `{name}` along `{}`",
                    cat.morphism_name(m)
                ));
            }
        }
        // β locally surjective
        let n3 = gens_of(&f3.groups[x.0]);
        for &m in &top.min_covering_sieve(x).members {
            let u = cat.src(m);
            let target = f3.res(m).mul(&Mat::identity(n3));
            let avail = beta[u.0].hcat(&relations_of(&f3.groups[u.0]));
            if !columns_in_image(&target, &avail) {
                return Err(format!(
                    "β not locally surjective at `{name}` along `{}`",
                    cat.morphism_name(m)
                ));
            }
        }
    }
    Ok(())
}
