//! Chunky categories, the additive cd-structure P_add, radditive
//! presheaves and radditivization, with the sheaf-theoretic
//! cross-check r(F) ≅ sheafify(F, t_add).
//!
//! Finite chunky fixtures are truncations: binary coproducts are
//! designated for exactly those pairs whose sum exists in the
//! category, and every chunkiness condition quantifies over the
//! designated sums. A genuinely coproduct-closed finite category would
//! be degenerate, so the truncation cap is part of each fixture.

use std::collections::BTreeMap;

use crate::density::DensityStructure;
use crate::fincat::{FiniteCategory, MorId, ObjId};
use crate::presheaf::{PresheafMorphism, SetPresheaf};
use crate::sheaf::sheafify;
use crate::topology::{cd_topology, CdStructure, DistinguishedSquare};

/// Per-morphism data of the third chunkiness condition: the two fiber
/// products of z: Z → X⊔Y along the coprojections, and the
/// decomposition isomorphism (Z×X) ⊔ (Z×Y) → Z.
#[derive(Debug, Clone)]
pub struct DecompositionWitness {
    pub z_to_sum: MorId,
    /// Projection Z×_{X⊔Y}X → Z.
    pub part_x: MorId,
    /// Projection Z×_{X⊔Y}Y → Z.
    pub part_y: MorId,
    /// The isomorphism from the designated sum of the two apexes to Z.
    pub iso: MorId,
}

/// Witness data of a chunky category.
#[derive(Debug, Clone)]
pub struct ChunkyWitness {
    pub initial: ObjId,
    /// Designated sums: (X, Y) → (apex, X → apex, Y → apex), for every
    /// ordered pair whose coproduct exists.
    pub sums: BTreeMap<(ObjId, ObjId), (ObjId, MorId, MorId)>,
    pub decompositions: Vec<DecompositionWitness>,
}

impl ChunkyWitness {
    /// The designated sum of x and y, if any.
    pub fn sum(&self, x: ObjId, y: ObjId) -> Option<&(ObjId, MorId, MorId)> {
        self.sums.get(&(x, y))
    }
}

/// Searches for a chunky-category witness: a strict initial object,
/// designated binary coproducts, pullback squares (0; X, Y; X⊔Y), and
/// the decomposition isomorphism for every morphism into a designated
/// sum. Returns None (with no indication which condition failed) when
/// the category is not chunky; use `why_not_chunky` for diagnostics.
pub fn is_chunky(cat: &FiniteCategory) -> Option<ChunkyWitness> {
    why_not_chunky(cat).ok()
}

/// As `is_chunky`, but reports the first violated condition. The
/// designated sums are found by exhaustive search: every pair whose
/// coproduct exists in the category is designated.
pub fn why_not_chunky(cat: &FiniteCategory) -> Result<ChunkyWitness, String> {
    let mut sums = BTreeMap::new();
    for x in cat.objects() {
        for y in cat.objects() {
            if let Some((apex, legs)) = cat.coproduct(&[x, y]) {
                sums.insert((x, y), (apex, legs[0], legs[1]));
            }
        }
    }
    why_not_chunky_with(cat, sums)
}

/// As `why_not_chunky`, but with the designated sums supplied by the
/// fixture (truncated fixtures designate only the sums inside their
/// cap). Each designated sum is re-verified as a genuine coproduct
/// cocone before the chunkiness conditions are checked.
pub fn why_not_chunky_with(
    cat: &FiniteCategory,
    sums: BTreeMap<(ObjId, ObjId), (ObjId, MorId, MorId)>,
) -> Result<ChunkyWitness, String> {
    let initial = cat
        .objects()
        .find(|&o| cat.is_strict_initial(o))
        .ok_or("no strict initial object (condition 1)")?;
    for (&(x, y), &(apex, ix, iy)) in &sums {
        if !cat.is_coproduct_cocone(&[x, y], apex, &[ix, iy]) {
            return Err(format!(
                "designated sum `{}` of ({}, {}) is not a coproduct",
                cat.object_name(apex),
                cat.object_name(x),
                cat.object_name(y)
            ));
        }
    }
    // condition (2): the 0-corner squares of designated sums are
    // pullbacks
    for (&(x, y), &(apex, ix, iy)) in &sums {
        let zero_to_x = *cat
            .hom(initial, x)
            .first()
            .ok_or("strict initial without a map out")?;
        let zero_to_y = *cat
            .hom(initial, y)
            .first()
            .ok_or("strict initial without a map out")?;
        let q = DistinguishedSquare {
            b_to_a: zero_to_x,
            b_to_y: zero_to_y,
            e: ix,
            p: iy,
        };
        if !q.is_pullback(cat) {
            return Err(format!(
                "square (0; {}, {}; {}) is not a pullback (condition 2)",
                cat.object_name(x),
                cat.object_name(y),
                cat.object_name(apex)
            ));
        }
    }
    // condition (3): every morphism into a designated sum decomposes
    let apexes: BTreeMap<ObjId, (MorId, MorId)> = sums
        .values()
        .map(|&(apex, ix, iy)| (apex, (ix, iy)))
        .collect();
    let mut decompositions = Vec::new();
    for (&apex, &(ix, iy)) in &apexes {
        for z in cat.objects() {
            for m in cat.hom(z, apex) {
                let (zx, px, _) = cat.pullback(m, ix).ok_or_else(|| {
                    format!(
                        "missing fiber product of `{}` with the first coprojection (condition 3)",
                        cat.morphism_name(m)
                    )
                })?;
                let (zy, py, _) = cat.pullback(m, iy).ok_or_else(|| {
                    format!(
                        "missing fiber product of `{}` with the second coprojection (condition 3)",
                        cat.morphism_name(m)
                    )
                })?;
                let &(_, jx, jy) = sums.get(&(zx, zy)).ok_or_else(|| {
                    format!(
                        "no designated sum for the decomposition parts of `{}` (condition 3)",
                        cat.morphism_name(m)
                    )
                })?;
                // the induced map (Z×X)⊔(Z×Y) → Z and its invertibility
                let sum_apex = sums[&(zx, zy)].0;
                let iso = cat
                    .hom(sum_apex, z)
                    .into_iter()
                    .find(|&u| cat.compose(u, jx) == px && cat.compose(u, jy) == py)
                    .ok_or("no map out of the decomposition sum (condition 3)")?;
                if !cat.is_isomorphism(iso) {
                    return Err(format!(
                        "decomposition map for `{}` is not an isomorphism (condition 3)",
                        cat.morphism_name(m)
                    ));
                }
                decompositions.push(DecompositionWitness {
                    z_to_sum: m,
                    part_x: px,
                    part_y: py,
                    iso,
                });
            }
        }
    }
    Ok(ChunkyWitness {
        initial,
        sums,
        decompositions,
    })
}

/// The additive cd-structure: one square (0; X, Y; X⊔Y) per designated
/// sum.
pub fn p_add(cat: &FiniteCategory, w: &ChunkyWitness) -> CdStructure {
    let squares = w
        .sums
        .iter()
        .map(|(&(x, y), &(_, ix, iy))| DistinguishedSquare {
            b_to_a: cat.hom(w.initial, x)[0],
            b_to_y: cat.hom(w.initial, y)[0],
            e: ix,
            p: iy,
        })
        .collect();
    CdStructure::new(squares)
}

/// The density structure of the boundedness proof for P_add: D_0(U) is
/// every morphism into U, D_n(U) for n ≥ 1 the isomorphisms into U.
pub fn add_density(cat: &FiniteCategory) -> DensityStructure {
    let mut levels = BTreeMap::new();
    for u in cat.objects() {
        levels.insert((u, 0), cat.morphisms_into(u).into_iter().collect());
        levels.insert(
            (u, 1),
            cat.morphisms_into(u)
                .into_iter()
                .filter(|&m| cat.is_isomorphism(m))
                .collect(),
        );
    }
    DensityStructure {
        stabilization: 1,
        levels,
    }
}

/// F is radditive when F(0) is a point and F(X⊔Y) → F(X)×F(Y) is a
/// bijection for every designated sum.
pub fn is_radditive(_cat: &FiniteCategory, w: &ChunkyWitness, f: &SetPresheaf) -> bool {
    if f.size(w.initial) != 1 {
        return false;
    }
    for (&(x, y), &(apex, ix, iy)) in &w.sums {
        if f.size(apex) != f.size(x) * f.size(y) {
            return false;
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in 0..f.size(apex) {
            if !seen.insert((f.res(ix, v), f.res(iy, v))) {
                return false;
            }
        }
    }
    true
}

/// The maximum decomposition of U: morphisms u_k: U_k → U from
/// non-initial indecomposable parts whose designated sum maps to U by
/// an isomorphism. Initial objects decompose into the empty list.
pub fn maximum_decomposition(cat: &FiniteCategory, w: &ChunkyWitness, u: ObjId) -> Vec<MorId> {
    fn rec(
        cat: &FiniteCategory,
        w: &ChunkyWitness,
        into_u: MorId,
        out: &mut Vec<MorId>,
        depth: usize,
    ) {
        assert!(depth < 64, "runaway decomposition");
        let part = cat.src(into_u);
        if cat.is_initial(part) {
            return;
        }
        // split along any designated sum isomorphic to the part with
        // two non-initial halves
        for (&(x, y), &(apex, ix, iy)) in &w.sums {
            if cat.is_initial(x) || cat.is_initial(y) {
                continue;
            }
            if let Some(phi) = cat.hom(apex, part).into_iter().find(|&m| cat.is_isomorphism(m)) {
                let _ = apex;
                rec(cat, w, cat.compose(into_u, cat.compose(phi, ix)), out, depth + 1);
                rec(cat, w, cat.compose(into_u, cat.compose(phi, iy)), out, depth + 1);
                return;
            }
        }
        out.push(into_u);
    }
    let mut out = Vec::new();
    rec(cat, w, cat.identity(u), &mut out, 0);
    out
}

/// All decompositions of U reachable by designated-sum splitting, as
/// sorted lists of part morphisms (the coarsest, [id_U], included for
/// non-initial U).
pub fn decompositions(cat: &FiniteCategory, w: &ChunkyWitness, u: ObjId) -> Vec<Vec<MorId>> {
    fn splits(cat: &FiniteCategory, w: &ChunkyWitness, into_u: MorId) -> Vec<Vec<MorId>> {
        let part = cat.src(into_u);
        if cat.is_initial(part) {
            return vec![vec![]];
        }
        let mut out = vec![vec![into_u]];
        for (&(x, y), &(apex, ix, iy)) in &w.sums {
            if cat.is_initial(x) || cat.is_initial(y) {
                continue;
            }
            for phi in cat.hom(apex, part) {
                if !cat.is_isomorphism(phi) {
                    continue;
                }
                let left = splits(cat, w, cat.compose(into_u, cat.compose(phi, ix)));
                let right = splits(cat, w, cat.compose(into_u, cat.compose(phi, iy)));
                for l in &left {
                    for r in &right {
                        let mut d = l.clone();
                        d.extend(r.iter().copied());
                        d.sort();
                        if !out.contains(&d) {
                            out.push(d);
                        }
                    }
                }
            }
        }
        out
    }
    let mut ds = splits(cat, w, cat.identity(u));
    ds.sort();
    ds.dedup();
    ds
}

/// Verifies that the decomposition poset D/U is filtered in the sense
/// used by the colimit formula: the maximum decomposition refines
/// every decomposition — each of its parts factors through exactly one
/// part of the other.
pub fn check_filtered(cat: &FiniteCategory, w: &ChunkyWitness, u: ObjId) -> bool {
    let max = maximum_decomposition(cat, w, u);
    for d in decompositions(cat, w, u) {
        for &atom in &max {
            let mut hits = 0;
            for &part in &d {
                for g in cat.hom(cat.src(atom), cat.src(part)) {
                    if cat.compose(part, g) == atom {
                        hits += 1;
                    }
                }
            }
            if hits != 1 {
                return false;
            }
        }
    }
    true
}

/// Radditivization r(F): r(F)(U) = ∏_k F(U_k) over the maximum
/// decomposition of U, together with the unit F → r(F).
pub fn radditivize(
    cat: &FiniteCategory,
    w: &ChunkyWitness,
    f: &SetPresheaf,
) -> (SetPresheaf, PresheafMorphism) {
    let decs: Vec<Vec<MorId>> = cat
        .objects()
        .map(|u| maximum_decomposition(cat, w, u))
        .collect();
    let sizes: Vec<usize> = decs
        .iter()
        .map(|d| d.iter().map(|&m| f.size(cat.src(m))).product())
        .collect();
    // mixed-radix tuple coding over the parts of a decomposition
    let unpack = |d: &[MorId], mut v: usize| -> Vec<usize> {
        d.iter()
            .map(|&m| {
                let s = f.size(cat.src(m));
                let x = v % s;
                v /= s;
                x
            })
            .collect()
    };
    let pack = |d: &[MorId], xs: &[usize]| -> usize {
        let mut v = 0;
        for (k, &m) in d.iter().enumerate().rev() {
            v = v * f.size(cat.src(m)) + xs[k];
        }
        v
    };
    let mut restrict = Vec::new();
    for g in cat.morphisms() {
        let (v_obj, u_obj) = (cat.src(g), cat.dst(g));
        let du = &decs[u_obj.0];
        let dv = &decs[v_obj.0];
        // each part of V lands in exactly one part of U
        let assignment: Vec<(usize, MorId)> = dv
            .iter()
            .map(|&vj| {
                let c = cat.compose(g, vj);
                let mut found = None;
                for (k, &uk) in du.iter().enumerate() {
                    for h in cat.hom(cat.src(vj), cat.src(uk)) {
                        if cat.compose(uk, h) == c {
                            assert!(found.is_none(), "part lands in two sum parts");
                            found = Some((k, h));
                        }
                    }
                }
                found.expect("part of the source decomposition misses every target part")
            })
            .collect();
        restrict.push(
            (0..sizes[u_obj.0])
                .map(|v| {
                    let xs = unpack(du, v);
                    let ys: Vec<usize> = assignment
                        .iter()
                        .map(|&(k, h)| f.res(h, xs[k]))
                        .collect();
                    pack(dv, &ys)
                })
                .collect(),
        );
    }
    let r = SetPresheaf { sizes, restrict };
    let unit = PresheafMorphism {
        components: cat
            .objects()
            .map(|u| {
                let du = &decs[u.0];
                (0..f.size(u))
                    .map(|x| {
                        let xs: Vec<usize> = du.iter().map(|&m| f.res(m, x)).collect();
                        pack(du, &xs)
                    })
                    .collect()
            })
            .collect(),
    };
    (r, unit)
}

/// The principal oracle: r(F) is canonically isomorphic to the
/// t_add-sheafification of F. Builds φ_U: r(F)(U) → aF(U) sending a
/// tuple to the unique section restricting to the unit images on the
/// parts, and checks φ is a natural bijection.
pub fn radditivize_matches_sheafification(
    cat: &FiniteCategory,
    w: &ChunkyWitness,
    f: &SetPresheaf,
) -> Result<(), String> {
    let (r, _) = radditivize(cat, w, f);
    let top = cd_topology(cat, &p_add(cat, w)).map_err(|e| e.to_string())?;
    let sh = sheafify(cat, &top, f);
    let af = sh.sheaf();
    let mut components = Vec::new();
    for u in cat.objects() {
        let du = maximum_decomposition(cat, w, u);
        let mut comp = Vec::with_capacity(r.size(u));
        for v in 0..r.size(u) {
            // decode the tuple
            let mut rem = v;
            let xs: Vec<usize> = du
                .iter()
                .map(|&m| {
                    let s = f.size(cat.src(m));
                    let x = rem % s;
                    rem /= s;
                    x
                })
                .collect();
            let matches: Vec<usize> = (0..af.size(u))
                .filter(|&y| {
                    du.iter().enumerate().all(|(k, &m)| {
                        af.res(m, y) == sh.unit.apply(cat.src(m), xs[k])
                    })
                })
                .collect();
            match matches.as_slice() {
                [y] => comp.push(*y),
                [] => return Err(format!("no section matches a tuple at `{}`", cat.object_name(u))),
                _ => return Err(format!("tuple matched by several sections at `{}`", cat.object_name(u))),
            }
        }
        components.push(comp);
    }
    let phi = PresheafMorphism { components };
    if !phi.is_natural(cat, &r, af) {
        return Err("comparison map is not natural".into());
    }
    if !phi.is_bijective(&r, af) {
        return Err("comparison map is not bijective".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::is_bounded;
    use crate::fixtures;
    use crate::presheaf::{constant_presheaf, random_presheaf, yoneda};
    use crate::regular::is_regular;
    use crate::topology::is_complete;

    type SumTable = BTreeMap<(ObjId, ObjId), (ObjId, MorId, MorId)>;

    fn chunky_fixtures() -> Vec<(String, FiniteCategory, Option<SumTable>)> {
        let mut out = Vec::new();
        for cap in 1..=3 {
            let sk = fixtures::finset_skeleton(cap);
            let sums = sk.designated_sums();
            out.push((format!("finset{cap}"), sk.cat, Some(sums)));
        }
        out.push(("one_object".into(), fixtures::one_object_category(), None));
        out.push((
            "two_subsets_sum".into(),
            fixtures::sum_completion(&fixtures::two_subsets_poset(), 2),
            None,
        ));
        out
    }

    fn witness_of(cat: &FiniteCategory, sums: &Option<SumTable>) -> ChunkyWitness {
        match sums {
            Some(s) => why_not_chunky_with(cat, s.clone()).unwrap(),
            None => why_not_chunky(cat).unwrap(),
        }
    }

    #[test]
    fn fixtures_are_chunky_and_toy_is_not() {
        for (name, cat, sums) in chunky_fixtures() {
            match sums {
                Some(s) => {
                    why_not_chunky_with(&cat, s).unwrap_or_else(|e| panic!("{name}: {e}"));
                }
                None => {
                    why_not_chunky(&cat).unwrap_or_else(|e| panic!("{name}: {e}"));
                }
            }
        }
        let toy = fixtures::toy_site();
        // the toy category has the sum A ⊔ Y = X, whose 0-corner square
        // is not a pullback (the fiber product of e and p is B, not ∅)
        let err = why_not_chunky(&toy.cat).unwrap_err();
        assert!(err.contains("condition 2"), "{err}");
    }

    #[test]
    fn p_add_is_complete_regular_bounded() {
        for (name, cat, sums) in chunky_fixtures() {
            let w = witness_of(&cat, &sums);
            let p = p_add(&cat, &w);
            assert!(
                is_complete(&cat, &p).unwrap().is_complete(),
                "{name}: P_add not complete"
            );
            let top = cd_topology(&cat, &p).unwrap();
            assert!(is_regular(&cat, &p, &top).is_regular(), "{name}: P_add not regular");
            let d = add_density(&cat);
            crate::density::validate_density(&cat, &d).unwrap();
            assert!(is_bounded(&cat, &p, &d).is_bounded(), "{name}: P_add not bounded");
            // coprojections are monomorphisms
            for &(_, ix, iy) in w.sums.values() {
                assert!(cat.is_monomorphism(ix) && cat.is_monomorphism(iy));
            }
        }
    }

    #[test]
    fn radditivity_detection() {
        let sk = fixtures::finset_skeleton(2);
        let w = why_not_chunky_with(&sk.cat, sk.designated_sums()).unwrap();
        for u in sk.cat.objects() {
            assert!(is_radditive(&sk.cat, &w, &yoneda(&sk.cat, u).0));
        }
        assert!(!is_radditive(&sk.cat, &w, &constant_presheaf(&sk.cat, 2)));
    }

    #[test]
    fn filtered_and_unit_iso_when_radditive() {
        for (name, cat, sums) in chunky_fixtures() {
            let w = witness_of(&cat, &sums);
            for u in cat.objects() {
                assert!(check_filtered(&cat, &w, u), "{name}: D/{u:?} not filtered");
            }
            for u in cat.objects() {
                let (r, unit) = radditivize(&cat, &w, &yoneda(&cat, u).0);
                r.validate(&cat).unwrap();
                assert!(unit.is_natural(&cat, &yoneda(&cat, u).0, &r));
                assert!(unit.is_bijective(&yoneda(&cat, u).0, &r), "{name}: unit not iso");
            }
        }
    }

    #[test]
    fn radditivize_is_idempotent_and_repairs_sums() {
        let sk = fixtures::finset_skeleton(3);
        let w = why_not_chunky_with(&sk.cat, sk.designated_sums()).unwrap();
        let f = constant_presheaf(&sk.cat, 2);
        let (r, _) = radditivize(&sk.cat, &w, &f);
        assert!(is_radditive(&sk.cat, &w, &r));
        // the constant-2 presheaf has F(n) = 2 for all n; r fixes the
        // sums: r(F)(n) = 2^n
        for n in 0..=3 {
            assert_eq!(r.size(sk.objs[n]), 1 << n);
        }
        let (rr, unit2) = radditivize(&sk.cat, &w, &r);
        assert!(unit2.is_bijective(&r, &rr));
    }

    #[test]
    fn radditivize_agrees_with_sheafification() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (name, cat, sums) in chunky_fixtures() {
            let w = witness_of(&cat, &sums);
            for _ in 0..6 {
                let f = random_presheaf(&mut rng, &cat, 2);
                radditivize_matches_sheafification(&cat, &w, &f)
                    .unwrap_or_else(|e| panic!("{name}: {e}"));
            }
        }
    }
}
