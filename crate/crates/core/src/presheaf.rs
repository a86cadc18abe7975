//! Set-valued presheaves on a finite category, with the pointwise
//! constructions used throughout: representables, products, fiber
//! products, coproducts, images, and matching families over sieves.
//!
//! Elements are dense indices 0..size per object; restriction along a
//! morphism f: U → V is a function F(V) → F(U) stored as a vector.

use std::collections::BTreeMap;

use crate::fincat::{FiniteCategory, MorId, ObjId};
use crate::topology::Sieve;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPresheaf {
    /// Cardinality of F(U) per object.
    pub sizes: Vec<usize>,
    /// restrict[f][v] ∈ F(src f) for v ∈ F(dst f).
    pub restrict: Vec<Vec<usize>>,
}

impl SetPresheaf {
    pub fn size(&self, u: ObjId) -> usize {
        self.sizes[u.0]
    }

    pub fn res(&self, f: MorId, v: usize) -> usize {
        self.restrict[f.0][v]
    }

    /// Functoriality check: identities act as identity, composites
    /// compose contravariantly.
    pub fn validate(&self, cat: &FiniteCategory) -> Result<(), String> {
        if self.sizes.len() != cat.object_count() || self.restrict.len() != cat.morphism_count() {
            return Err("presheaf data has the wrong shape".into());
        }
        for f in cat.morphisms() {
            let tbl = &self.restrict[f.0];
            if tbl.len() != self.sizes[cat.dst(f).0] {
                return Err(format!(
                    "restriction along `{}` has wrong domain size",
                    cat.morphism_name(f)
                ));
            }
            if tbl.iter().any(|&v| v >= self.sizes[cat.src(f).0]) {
                return Err(format!(
                    "restriction along `{}` has out-of-range values",
                    cat.morphism_name(f)
                ));
            }
        }
        for x in cat.objects() {
            let id = cat.identity(x);
            for v in 0..self.sizes[x.0] {
                if self.res(id, v) != v {
                    return Err(format!(
                        "identity of `{}` does not act trivially",
                        cat.object_name(x)
                    ));
                }
            }
        }
        for g in cat.morphisms() {
            for f in cat.morphisms() {
                if cat.dst(f) != cat.src(g) {
                    continue;
                }
                let gf = cat.compose(g, f);
                for v in 0..self.sizes[cat.dst(g).0] {
                    if self.res(gf, v) != self.res(f, self.res(g, v)) {
                        return Err(format!(
                            "functoriality fails on `{}` ∘ `{}`",
                            cat.morphism_name(g),
                            cat.morphism_name(f)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The terminal presheaf (single point everywhere).
    pub fn point(cat: &FiniteCategory) -> SetPresheaf {
        SetPresheaf {
            sizes: vec![1; cat.object_count()],
            restrict: vec![vec![0]; cat.morphism_count()],
        }
    }
}

/// The representable presheaf Hom(−, x). The second component indexes
/// its elements: element i of F(U) is homs[U][i].
pub fn yoneda(cat: &FiniteCategory, x: ObjId) -> (SetPresheaf, Vec<Vec<MorId>>) {
    let homs: Vec<Vec<MorId>> = cat.objects().map(|u| cat.hom(u, x)).collect();
    let sizes: Vec<usize> = homs.iter().map(|h| h.len()).collect();
    let mut restrict = Vec::with_capacity(cat.morphism_count());
    for f in cat.morphisms() {
        let (u, v) = (cat.src(f), cat.dst(f));
        let tbl = homs[v.0]
            .iter()
            .map(|&h| {
                let comp = cat.compose(h, f);
                homs[u.0].iter().position(|&m| m == comp).unwrap()
            })
            .collect();
        restrict.push(tbl);
    }
    (SetPresheaf { sizes, restrict }, homs)
}

/// The presheaf morphism y(g): y(a) → y(b) induced by g: a → b.
pub fn yoneda_map(cat: &FiniteCategory, g: MorId) -> PresheafMorphism {
    let (ya, homs_a) = yoneda(cat, cat.src(g));
    let (_yb, homs_b) = yoneda(cat, cat.dst(g));
    let _ = ya;
    let components = cat
        .objects()
        .map(|u| {
            homs_a[u.0]
                .iter()
                .map(|&h| {
                    let comp = cat.compose(g, h);
                    homs_b[u.0].iter().position(|&m| m == comp).unwrap()
                })
                .collect()
        })
        .collect();
    PresheafMorphism { components }
}

/// A morphism of presheaves: componentwise maps F(U) → G(U).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresheafMorphism {
    pub components: Vec<Vec<usize>>,
}

impl PresheafMorphism {
    pub fn apply(&self, u: ObjId, v: usize) -> usize {
        self.components[u.0][v]
    }

    pub fn identity(f: &SetPresheaf) -> PresheafMorphism {
        PresheafMorphism {
            components: f.sizes.iter().map(|&n| (0..n).collect()).collect(),
        }
    }

    /// self ∘ other.
    pub fn compose(&self, other: &PresheafMorphism) -> PresheafMorphism {
        PresheafMorphism {
            components: other
                .components
                .iter()
                .enumerate()
                .map(|(u, comp)| comp.iter().map(|&v| self.components[u][v]).collect())
                .collect(),
        }
    }

    pub fn is_natural(&self, cat: &FiniteCategory, f: &SetPresheaf, g: &SetPresheaf) -> bool {
        if self.components.len() != cat.object_count() {
            return false;
        }
        for u in cat.objects() {
            if self.components[u.0].len() != f.sizes[u.0] {
                return false;
            }
            if self.components[u.0].iter().any(|&v| v >= g.sizes[u.0]) {
                return false;
            }
        }
        for m in cat.morphisms() {
            let (u, v) = (cat.src(m), cat.dst(m));
            for x in 0..f.sizes[v.0] {
                let lhs = self.components[u.0][f.res(m, x)];
                let rhs = g.res(m, self.components[v.0][x]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_bijective(&self, f: &SetPresheaf, g: &SetPresheaf) -> bool {
        self.components.iter().enumerate().all(|(u, comp)| {
            let mut seen = vec![false; g.sizes[u]];
            if comp.len() != f.sizes[u] {
                return false;
            }
            for &v in comp {
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
            seen.iter().all(|&b| b)
        })
    }
}

/// Pointwise product with projections. Element of (F×G)(U) is
/// a·|G(U)| + b.
pub fn product(
    cat: &FiniteCategory,
    f: &SetPresheaf,
    g: &SetPresheaf,
) -> (SetPresheaf, PresheafMorphism, PresheafMorphism) {
    let sizes: Vec<usize> = f.sizes.iter().zip(&g.sizes).map(|(&a, &b)| a * b).collect();
    let mut restrict = Vec::with_capacity(cat.morphism_count());
    for m in cat.morphisms() {
        let src = cat.src(m);
        let dst = cat.dst(m);
        let mut tbl = Vec::with_capacity(sizes[dst.0]);
        for a in 0..f.sizes[dst.0] {
            for b in 0..g.sizes[dst.0] {
                tbl.push(f.res(m, a) * g.sizes[src.0] + g.res(m, b));
            }
        }
        restrict.push(tbl);
    }
    let pr1 = PresheafMorphism {
        components: cat
            .objects()
            .map(|u| {
                let mut c = Vec::new();
                for a in 0..f.sizes[u.0] {
                    for _b in 0..g.sizes[u.0] {
                        c.push(a);
                    }
                }
                c
            })
            .collect(),
    };
    let pr2 = PresheafMorphism {
        components: cat
            .objects()
            .map(|u| {
                let mut c = Vec::new();
                for _a in 0..f.sizes[u.0] {
                    for b in 0..g.sizes[u.0] {
                        c.push(b);
                    }
                }
                c
            })
            .collect(),
    };
    (SetPresheaf { sizes, restrict }, pr1, pr2)
}

/// Pointwise coproduct with injections: elements of F first, then G.
pub fn coproduct(
    cat: &FiniteCategory,
    f: &SetPresheaf,
    g: &SetPresheaf,
) -> (SetPresheaf, PresheafMorphism, PresheafMorphism) {
    let sizes: Vec<usize> = f.sizes.iter().zip(&g.sizes).map(|(&a, &b)| a + b).collect();
    let mut restrict = Vec::with_capacity(cat.morphism_count());
    for m in cat.morphisms() {
        let src = cat.src(m);
        let dst = cat.dst(m);
        let mut tbl = Vec::with_capacity(sizes[dst.0]);
        for a in 0..f.sizes[dst.0] {
            tbl.push(f.res(m, a));
        }
        for b in 0..g.sizes[dst.0] {
            tbl.push(f.sizes[src.0] + g.res(m, b));
        }
        restrict.push(tbl);
    }
    let inj1 = PresheafMorphism {
        components: cat.objects().map(|u| (0..f.sizes[u.0]).collect()).collect(),
    };
    let inj2 = PresheafMorphism {
        components: cat
            .objects()
            .map(|u| (0..g.sizes[u.0]).map(|b| f.sizes[u.0] + b).collect())
            .collect(),
    };
    (SetPresheaf { sizes, restrict }, inj1, inj2)
}

/// A subpresheaf carved out of `g` by a pointwise membership predicate
/// (which must be closed under restriction). Returns the subpresheaf,
/// the inclusion, and per-object the indices of the chosen elements.
pub fn subpresheaf(
    cat: &FiniteCategory,
    g: &SetPresheaf,
    member: impl Fn(ObjId, usize) -> bool,
) -> (SetPresheaf, PresheafMorphism, Vec<Vec<usize>>) {
    let chosen: Vec<Vec<usize>> = cat
        .objects()
        .map(|u| (0..g.sizes[u.0]).filter(|&v| member(u, v)).collect())
        .collect();
    let index_of: Vec<BTreeMap<usize, usize>> = chosen
        .iter()
        .map(|c| c.iter().enumerate().map(|(i, &v)| (v, i)).collect())
        .collect();
    let sizes: Vec<usize> = chosen.iter().map(|c| c.len()).collect();
    let mut restrict = Vec::with_capacity(cat.morphism_count());
    for m in cat.morphisms() {
        let (src, dst) = (cat.src(m), cat.dst(m));
        let tbl = chosen[dst.0]
            .iter()
            .map(|&v| {
                let w = g.res(m, v);
                *index_of[src.0]
                    .get(&w)
                    .expect("membership predicate not closed under restriction")
            })
            .collect();
        restrict.push(tbl);
    }
    let incl = PresheafMorphism {
        components: chosen.clone(),
    };
    (SetPresheaf { sizes, restrict }, incl, chosen)
}

/// Fiber product F ×_H G of φ: F → H and ψ: G → H, as a subpresheaf of
/// the product.
pub fn fiber_product(
    cat: &FiniteCategory,
    f: &SetPresheaf,
    g: &SetPresheaf,
    phi: &PresheafMorphism,
    psi: &PresheafMorphism,
) -> (SetPresheaf, PresheafMorphism, PresheafMorphism) {
    let (prod, pr1, pr2) = product(cat, f, g);
    let (sub, incl, _chosen) = subpresheaf(cat, &prod, |u, v| {
        let a = pr1.apply(u, v);
        let b = pr2.apply(u, v);
        phi.apply(u, a) == psi.apply(u, b)
    });
    let p1 = pr1.compose(&incl);
    let p2 = pr2.compose(&incl);
    (sub, p1, p2)
}

/// The image of φ: F → G as a subpresheaf of G with its inclusion.
pub fn image(
    cat: &FiniteCategory,
    f: &SetPresheaf,
    g: &SetPresheaf,
    phi: &PresheafMorphism,
) -> (SetPresheaf, PresheafMorphism) {
    let hit: Vec<Vec<bool>> = cat
        .objects()
        .map(|u| {
            let mut h = vec![false; g.sizes[u.0]];
            for a in 0..f.sizes[u.0] {
                h[phi.apply(u, a)] = true;
            }
            h
        })
        .collect();
    let (sub, incl, _) = subpresheaf(cat, g, |u, v| hit[u.0][v]);
    (sub, incl)
}

/// All natural transformations F → G, by backtracking over the values
/// at each object-element pair with incremental naturality checks.
pub fn enumerate_morphisms(
    cat: &FiniteCategory,
    f: &SetPresheaf,
    g: &SetPresheaf,
) -> Vec<PresheafMorphism> {
    // slots: flattened (object, element) pairs in order
    let mut slots: Vec<(ObjId, usize)> = Vec::new();
    for u in cat.objects() {
        for v in 0..f.sizes[u.0] {
            slots.push((u, v));
        }
    }
    let slot_index = |u: ObjId, v: usize| -> usize {
        let mut idx = 0;
        for w in cat.objects() {
            if w == u {
                return idx + v;
            }
            idx += f.sizes[w.0];
        }
        unreachable!()
    };
    let mut out = Vec::new();
    let mut assign: Vec<Option<usize>> = vec![None; slots.len()];
    fn rec(
        cat: &FiniteCategory,
        f: &SetPresheaf,
        g: &SetPresheaf,
        slots: &[(ObjId, usize)],
        slot_index: &dyn Fn(ObjId, usize) -> usize,
        i: usize,
        assign: &mut Vec<Option<usize>>,
        out: &mut Vec<PresheafMorphism>,
    ) {
        if i == slots.len() {
            let mut components: Vec<Vec<usize>> = Vec::with_capacity(cat.object_count());
            let mut k = 0;
            for u in cat.objects() {
                let n = f.sizes[u.0];
                components.push((0..n).map(|j| assign[k + j].unwrap()).collect());
                k += n;
            }
            out.push(PresheafMorphism { components });
            return;
        }
        let (u, v) = slots[i];
        'cand: for w in 0..g.sizes[u.0] {
            // naturality against every morphism with an already-assigned
            // endpoint slot
            for m in cat.morphisms_from(u) {
                // m: u → dst; square: φ_u ∘ F(m) = G(m) ∘ φ_dst, checked
                // at elements x ∈ F(dst) with F(m)(x) = v
                let dst = cat.dst(m);
                for x in 0..f.sizes[dst.0] {
                    if f.res(m, x) != v {
                        continue;
                    }
                    let j = slot_index(dst, x);
                    if let Some(y) = assign[j] {
                        if g.res(m, y) != w {
                            continue 'cand;
                        }
                    }
                }
            }
            for m in cat.morphisms_into(u) {
                let src = cat.src(m);
                let tgt_elt = f.res(m, v);
                let j = slot_index(src, tgt_elt);
                if let Some(y) = assign[j] {
                    if y != g.res(m, w) {
                        continue 'cand;
                    }
                }
            }
            assign[i] = Some(w);
            rec(cat, f, g, slots, slot_index, i + 1, assign, out);
            assign[i] = None;
        }
    }
    rec(cat, f, g, &slots, &slot_index, 0, &mut assign, &mut out);
    out
}

/// A matching family on a sieve: a choice a_f ∈ F(src f) per member f,
/// compatible with restriction.
pub type MatchingFamily = BTreeMap<MorId, usize>;

/// Enumerates all matching families of F on the sieve S by backtracking
/// over the members in order, checking all binary compatibilities
/// a_{f∘g} = F(g)(a_f) as soon as both endpoints are assigned.
pub fn matching_families(cat: &FiniteCategory, f: &SetPresheaf, s: &Sieve) -> Vec<MatchingFamily> {
    let members: Vec<MorId> = s.members.iter().copied().collect();
    let pos: BTreeMap<MorId, usize> = members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    // constraints[i] = list of (j, g) meaning member[j] = member[i] ∘ g,
    // so a_{member[j]} must equal F(g)(a_{member[i]}).
    let mut constraints: Vec<Vec<(usize, MorId)>> = vec![Vec::new(); members.len()];
    for (i, &m) in members.iter().enumerate() {
        for g in cat.morphisms_into(cat.src(m)) {
            let comp = cat.compose(m, g);
            if let Some(&j) = pos.get(&comp) {
                constraints[i].push((j, g));
            }
        }
    }
    let mut out = Vec::new();
    let mut assign: Vec<Option<usize>> = vec![None; members.len()];
    fn rec(
        cat: &FiniteCategory,
        f: &SetPresheaf,
        members: &[MorId],
        constraints: &[Vec<(usize, MorId)>],
        i: usize,
        assign: &mut Vec<Option<usize>>,
        out: &mut Vec<MatchingFamily>,
    ) {
        if i == members.len() {
            out.push(
                members
                    .iter()
                    .enumerate()
                    .map(|(k, &m)| (m, assign[k].unwrap()))
                    .collect(),
            );
            return;
        }
        let dom = cat.src(members[i]);
        'cand: for v in 0..f.sizes[dom.0] {
            // check constraints where i is the source of a propagation
            for &(j, g) in &constraints[i] {
                if let Some(w) = assign[j] {
                    if f.res(g, v) != w {
                        continue 'cand;
                    }
                }
            }
            // and where i is the target
            for k in 0..i {
                for &(j, g) in &constraints[k] {
                    if j == i {
                        if let Some(w) = assign[k] {
                            if f.res(g, w) != v {
                                continue 'cand;
                            }
                        }
                    }
                }
            }
            assign[i] = Some(v);
            rec(cat, f, members, constraints, i + 1, assign, out);
            assign[i] = None;
        }
    }
    rec(cat, f, &members, &constraints, 0, &mut assign, &mut out);
    out
}

/// The constant presheaf with k elements everywhere (identity
/// restrictions).
pub fn constant_presheaf(cat: &FiniteCategory, k: usize) -> SetPresheaf {
    SetPresheaf {
        sizes: vec![k; cat.object_count()],
        restrict: vec![(0..k).collect(); cat.morphism_count()],
    }
}

/// A random presheaf: a small combinator tree of representables and
/// constants glued with products and coproducts. Always functorial.
pub fn random_presheaf<R: rand::Rng>(rng: &mut R, cat: &FiniteCategory, depth: usize) -> SetPresheaf {
    if depth == 0 || rng.gen_bool(0.4) {
        return if rng.gen_bool(0.7) {
            let objs: Vec<ObjId> = cat.objects().collect();
            yoneda(cat, objs[rng.gen_range(0..objs.len())]).0
        } else {
            constant_presheaf(cat, rng.gen_range(1..=3))
        };
    }
    let left = random_presheaf(rng, cat, depth - 1);
    let right = random_presheaf(rng, cat, depth - 1);
    if rng.gen_bool(0.5) {
        product(cat, &left, &right).0
    } else {
        coproduct(cat, &left, &right).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::topology::sieve_generated_by;

    #[test]
    fn yoneda_is_functorial() {
        let toy = fixtures::toy_site();
        let c = &toy.cat;
        for x in c.objects() {
            let (y, _) = yoneda(c, x);
            y.validate(c).unwrap();
        }
    }

    #[test]
    fn yoneda_map_natural() {
        let toy = fixtures::toy_site();
        let c = &toy.cat;
        let (ya, _) = yoneda(c, toy.o_a);
        let (yx, _) = yoneda(c, toy.o_x);
        let m = yoneda_map(c, toy.e);
        assert!(m.is_natural(c, &ya, &yx));
    }

    #[test]
    fn product_and_fiber_product() {
        let toy = fixtures::toy_site();
        let c = &toy.cat;
        let (ya, _) = yoneda(c, toy.o_a);
        let (yy, _) = yoneda(c, toy.o_y);
        let (prod, pr1, pr2) = product(c, &ya, &yy);
        prod.validate(c).unwrap();
        assert!(pr1.is_natural(c, &prod, &ya));
        assert!(pr2.is_natural(c, &prod, &yy));
        // fiber product of y(A) → y(X) ← y(Y) is y(B) pointwise
        let (yx, _) = yoneda(c, toy.o_x);
        let _ = &yx;
        let ea = yoneda_map(c, toy.e);
        let py = yoneda_map(c, toy.p);
        let (fp, p1, p2) = fiber_product(c, &ya, &yy, &ea, &py);
        fp.validate(c).unwrap();
        assert!(p1.is_natural(c, &fp, &ya));
        assert!(p2.is_natural(c, &fp, &yy));
        let (yb, _) = yoneda(c, toy.o_b);
        assert_eq!(fp.sizes, yb.sizes);
    }

    #[test]
    fn matching_families_on_ep_sieve() {
        let toy = fixtures::toy_site();
        let c = &toy.cat;
        // On the (e,p)-sieve, a matching family of y(X) is determined by
        // compatible elements over A, Y, B, ∅: exactly one exists.
        let (yx, _) = yoneda(c, toy.o_x);
        let s = sieve_generated_by(c, toy.o_x, &[toy.e, toy.p]);
        let fams = matching_families(c, &yx, &s);
        assert_eq!(fams.len(), 1);
        // For the two-point constant presheaf the families on the same
        // sieve are the two constant ones (the sieve's domains are
        // connected by B).
        let two = SetPresheaf {
            sizes: vec![2; c.object_count()],
            restrict: vec![vec![0, 1]; c.morphism_count()],
        };
        two.validate(c).unwrap();
        let fams = matching_families(c, &two, &s);
        assert_eq!(fams.len(), 2);
    }

    #[test]
    fn enumerate_morphisms_count() {
        let toy = fixtures::toy_site();
        let c = &toy.cat;
        let pt = SetPresheaf::point(c);
        let two = SetPresheaf {
            sizes: vec![2; c.object_count()],
            restrict: vec![vec![0, 1]; c.morphism_count()],
        };
        // maps pt → two: pick one of 2 points naturally: the constants: 2
        let ms = enumerate_morphisms(c, &pt, &two);
        assert_eq!(ms.len(), 2);
        for m in &ms {
            assert!(m.is_natural(c, &pt, &two));
        }
    }
}
