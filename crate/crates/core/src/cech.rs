//! Čech cohomology of abelian presheaves over the simple coverings of a
//! cd-structure: the Čech complex of a finite covering family is built
//! from iterated fiber products in the category, and the Čech
//! cohomology of an object is the filtered colimit of the family
//! cohomologies over the refinement preorder. The construction is
//! inapplicable (returns None) when a required fiber product does not
//! exist in the category.

use crate::abelian::{cokernel, FgAbGroup, Mat, PresentedComplex, Subquotient};
use crate::absheaf::{gens_of, relations_of, AbPresheaf};
use crate::fincat::{FiniteCategory, MorId, ObjId};
use crate::topology::{simple_coverings, CdStructure};

/// An iterated fiber product U_{t_0} ×_X … ×_X U_{t_n} with its
/// structure maps and the construction steps needed for mediating
/// morphisms.
#[derive(Debug, Clone)]
pub struct IteratedPullback {
    pub apex: ObjId,
    pub to_base: MorId,
    /// Projection to each chosen factor.
    pub projections: Vec<MorId>,
    /// steps[k] = (projection to the previous apex, projection to the
    /// k-th factor) of the binary pullback at stage k ≥ 1.
    steps: Vec<(MorId, MorId)>,
}

/// Builds the iterated fiber product of the members `family[tuple[k]]`
/// over the base, left to right.
pub fn iterated_pullback(
    cat: &FiniteCategory,
    family: &[MorId],
    tuple: &[usize],
) -> Option<IteratedPullback> {
    assert!(!tuple.is_empty());
    let first = family[tuple[0]];
    let mut pb = IteratedPullback {
        apex: cat.src(first),
        to_base: first,
        projections: vec![cat.identity(cat.src(first))],
        steps: Vec::new(),
    };
    for &t in &tuple[1..] {
        let (apex, pa, py) = cat.pullback(pb.to_base, family[t])?;
        pb.projections = pb
            .projections
            .iter()
            .map(|&pr| cat.compose(pr, pa))
            .collect();
        pb.projections.push(py);
        pb.to_base = cat.compose(pb.to_base, pa);
        pb.steps.push((pa, py));
        pb.apex = apex;
    }
    Some(pb)
}

/// The unique morphism from `from` into the iterated pullback with the
/// prescribed factor maps.
pub fn mediate_into(
    cat: &FiniteCategory,
    pb: &IteratedPullback,
    factor_maps: &[MorId],
) -> Option<MorId> {
    assert_eq!(factor_maps.len(), pb.steps.len() + 1);
    let mut m = factor_maps[0];
    for (k, &(pa, py)) in pb.steps.iter().enumerate() {
        m = cat.mediating(pa, py, m, factor_maps[k + 1])?;
    }
    Some(m)
}

/// The Čech complex of F for the covering family of X, in degrees
/// 0..=max_n: C^n = ⊕ over (n+1)-tuples of F(iterated fiber product).
pub fn cech_complex(
    cat: &FiniteCategory,
    f: &AbPresheaf,
    family: &[MorId],
    max_n: usize,
) -> Option<PresentedComplex> {
    let k = family.len();
    let tuples_of = |n: usize| -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..=n {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..k).map(move |i| {
                        let mut t2 = t.clone();
                        t2.push(i);
                        t2
                    })
                })
                .collect();
        }
        out
    };
    let mut degree_tuples = Vec::with_capacity(max_n + 1);
    let mut degree_pbs: Vec<Vec<IteratedPullback>> = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let ts = tuples_of(n);
        let pbs: Option<Vec<IteratedPullback>> = ts
            .iter()
            .map(|t| iterated_pullback(cat, family, t))
            .collect();
        degree_pbs.push(pbs?);
        degree_tuples.push(ts);
    }
    let offsets: Vec<Vec<usize>> = degree_pbs
        .iter()
        .map(|pbs| {
            let mut off = Vec::with_capacity(pbs.len());
            let mut total = 0;
            for pb in pbs {
                off.push(total);
                total += gens_of(&f.groups[pb.apex.0]);
            }
            off
        })
        .collect();
    let gens: Vec<usize> = degree_pbs
        .iter()
        .map(|pbs| pbs.iter().map(|pb| gens_of(&f.groups[pb.apex.0])).sum())
        .collect();
    let rels: Vec<Mat> = degree_pbs
        .iter()
        .enumerate()
        .map(|(n, pbs)| {
            let cols: usize = pbs
                .iter()
                .map(|pb| f.groups[pb.apex.0].torsion.len())
                .sum();
            let mut r = Mat::zero(gens[n], cols);
            let mut co = 0;
            for (pi, pb) in pbs.iter().enumerate() {
                let rel = relations_of(&f.groups[pb.apex.0]);
                for i in 0..rel.rows {
                    for j in 0..rel.cols {
                        r.set(offsets[n][pi] + i, co + j, rel.get(i, j));
                    }
                }
                co += rel.cols;
            }
            r
        })
        .collect();
    let mut diff = Vec::with_capacity(max_n);
    for n in 0..max_n {
        let mut d = Mat::zero(gens[n + 1], gens[n]);
        for (ti, t) in degree_tuples[n + 1].iter().enumerate() {
            let pb_t = &degree_pbs[n + 1][ti];
            for omit in 0..t.len() {
                let face: Vec<usize> = t
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != omit)
                    .map(|(_, &x)| x)
                    .collect();
                let fi = degree_tuples[n]
                    .iter()
                    .position(|other| *other == face)
                    .unwrap();
                let pb_f = &degree_pbs[n][fi];
                let factor_maps: Vec<MorId> = (0..t.len())
                    .filter(|&i| i != omit)
                    .map(|i| pb_t.projections[i])
                    .collect();
                let med = mediate_into(cat, pb_f, &factor_maps)?;
                let mat = f.res(med);
                let sign = if omit % 2 == 0 { 1 } else { -1 };
                for i in 0..mat.rows {
                    for j in 0..mat.cols {
                        let v =
                            d.get(offsets[n + 1][ti] + i, offsets[n][fi] + j) + sign * mat.get(i, j);
                        d.set(offsets[n + 1][ti] + i, offsets[n][fi] + j, v);
                    }
                }
            }
        }
        diff.push(d);
    }
    Some(PresentedComplex { gens, rels, diff })
}

/// H^n of the Čech complex, with representatives (for refinement maps).
fn cech_h_with_reps(cx: &PresentedComplex, n: usize) -> Subquotient {
    cx.cohomology_with_reps(n)
}

/// Does `fine` refine `coarse` (every member factors through some
/// member of the coarse family)? Returns the chosen index and
/// factorization per member.
pub fn refinement(
    cat: &FiniteCategory,
    coarse: &[MorId],
    fine: &[MorId],
) -> Option<Vec<(usize, MorId)>> {
    fine.iter()
        .map(|&v| {
            for (i, &u) in coarse.iter().enumerate() {
                for w in cat.hom(cat.src(v), cat.src(u)) {
                    if cat.compose(u, w) == v {
                        return Some((i, w));
                    }
                }
            }
            None
        })
        .collect()
}

/// The chain map C•(coarse) → C•(fine) induced by a refinement choice.
pub fn refinement_chain_map(
    cat: &FiniteCategory,
    f: &AbPresheaf,
    coarse: &[MorId],
    fine: &[MorId],
    choice: &[(usize, MorId)],
    n: usize,
) -> Option<Mat> {
    let tuples = |k: usize, len: usize| -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..k).map(move |i| {
                        let mut t2 = t.clone();
                        t2.push(i);
                        t2
                    })
                })
                .collect();
        }
        out
    };
    let fine_tuples = tuples(fine.len(), n + 1);
    let coarse_tuples = tuples(coarse.len(), n + 1);
    let fine_pbs: Option<Vec<IteratedPullback>> = fine_tuples
        .iter()
        .map(|t| iterated_pullback(cat, fine, t))
        .collect();
    let coarse_pbs: Option<Vec<IteratedPullback>> = coarse_tuples
        .iter()
        .map(|t| iterated_pullback(cat, coarse, t))
        .collect();
    let (fine_pbs, coarse_pbs) = (fine_pbs?, coarse_pbs?);
    let off = |pbs: &[IteratedPullback]| -> Vec<usize> {
        let mut o = Vec::with_capacity(pbs.len());
        let mut total = 0;
        for pb in pbs {
            o.push(total);
            total += gens_of(&f.groups[pb.apex.0]);
        }
        o
    };
    let fine_off = off(&fine_pbs);
    let coarse_off = off(&coarse_pbs);
    let rows: usize = fine_pbs.iter().map(|pb| gens_of(&f.groups[pb.apex.0])).sum();
    let cols: usize = coarse_pbs
        .iter()
        .map(|pb| gens_of(&f.groups[pb.apex.0]))
        .sum();
    let mut m = Mat::zero(rows, cols);
    for (ti, t) in fine_tuples.iter().enumerate() {
        let image: Vec<usize> = t.iter().map(|&j| choice[j].0).collect();
        let ci = coarse_tuples.iter().position(|c| *c == image).unwrap();
        // map fine apex → coarse apex via the factorizations
        let factor_maps: Vec<MorId> = t
            .iter()
            .enumerate()
            .map(|(pos, &j)| cat.compose(choice[j].1, fine_pbs[ti].projections[pos]))
            .collect();
        let med = mediate_into(cat, &coarse_pbs[ci], &factor_maps)?;
        let mat = f.res(med);
        for i in 0..mat.rows {
            for j in 0..mat.cols {
                m.set(fine_off[ti] + i, coarse_off[ci] + j, mat.get(i, j));
            }
        }
    }
    Some(m)
}

/// Čech cohomology H^n(X, F) as the colimit over the simple coverings
/// of X ordered by refinement. None if a needed fiber product or
/// mediating morphism is missing.
pub fn cech_cohomology(
    cat: &FiniteCategory,
    cd: &CdStructure,
    f: &AbPresheaf,
    x: ObjId,
    max_n: usize,
) -> Option<Vec<FgAbGroup>> {
    let sc = simple_coverings(cat, cd);
    let fams: Vec<Vec<MorId>> = sc
        .families
        .get(&x)
        .map(|s| s.iter().map(|fam| fam.iter().copied().collect()).collect())
        .unwrap_or_default();
    if fams.is_empty() {
        return None;
    }
    // complexes one degree above the top requested degree, for cocycles
    let cxs: Option<Vec<PresentedComplex>> = fams
        .iter()
        .map(|fam| cech_complex(cat, f, fam, max_n + 1))
        .collect();
    let cxs = cxs?;
    let mut out = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let hs: Vec<Subquotient> = cxs.iter().map(|cx| cech_h_with_reps(cx, n)).collect();
        // colimit presentation: one block of generators per family,
        // relations: torsion + (x − ρx) per refinement pair
        let offsets: Vec<usize> = {
            let mut o = Vec::with_capacity(hs.len());
            let mut total = 0;
            for h in &hs {
                o.push(total);
                total += gens_of(&h.group);
            }
            o
        };
        let total: usize = hs.iter().map(|h| gens_of(&h.group)).sum();
        let mut rel_cols: Vec<Vec<i64>> = Vec::new();
        for (fi, h) in hs.iter().enumerate() {
            let rel = relations_of(&h.group);
            for j in 0..rel.cols {
                let mut col = vec![0i64; total];
                for i in 0..rel.rows {
                    col[offsets[fi] + i] = rel.get(i, j);
                }
                rel_cols.push(col);
            }
        }
        for (ci, coarse) in fams.iter().enumerate() {
            for (fi, fine) in fams.iter().enumerate() {
                if ci == fi {
                    continue;
                }
                let Some(choice) = refinement(cat, coarse, fine) else {
                    continue;
                };
                let chain = refinement_chain_map(cat, f, coarse, fine, &choice, n)?;
                // induced map on cohomology generators
                for j in 0..gens_of(&hs[ci].group) {
                    let rep = hs[ci].reps.column(j);
                    let moved = chain.apply(&rep);
                    let coords = hs[fi]
                        .express(&moved)
                        .expect("refinement maps cocycles to cocycles");
                    let mut col = vec![0i64; total];
                    col[offsets[ci] + j] = 1;
                    for (i, &v) in coords.iter().enumerate() {
                        col[offsets[fi] + i] -= v;
                    }
                    rel_cols.push(col);
                }
            }
        }
        let rel = if rel_cols.is_empty() {
            Mat::zero(total, 0)
        } else {
            // rel_cols holds columns; transpose into a matrix
            let mut m = Mat::zero(total, rel_cols.len());
            for (j, col) in rel_cols.iter().enumerate() {
                for i in 0..total {
                    m.set(i, j, col[i]);
                }
            }
            m
        };
        out.push(cokernel(&rel));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::absheaf::{ab_sheafify, AbPresheaf};
    use crate::fixtures;
    use crate::topology::cd_topology;

    #[test]
    fn toy_cech_of_sheafified_z() {
        let toy = fixtures::toy_site();
        let c = &toy.cat;
        let top = cd_topology(c, &toy.cd).unwrap();
        let z = AbPresheaf::constant(c, FgAbGroup::free(1));
        let az = ab_sheafify(c, &top, &z).presheaf;
        let h = cech_cohomology(c, &toy.cd, &az, toy.o_x, 2).unwrap();
        assert_eq!(h[0], FgAbGroup::free(1));
        assert_eq!(h[1], FgAbGroup::zero());
        assert_eq!(h[2], FgAbGroup::zero());
    }

    #[test]
    fn circle_cech_h1() {
        let space = fixtures::circle_space();
        let site = fixtures::open_site(&space);
        let c = &site.cat;
        let top = cd_topology(c, &site.cd).unwrap();
        let z = AbPresheaf::constant(c, FgAbGroup::free(1));
        let az = ab_sheafify(c, &top, &z).presheaf;
        // whole space: all four points
        let whole = site
            .object_of(&vec![true; space.points()])
            .expect("whole space is an open");
        let h = cech_cohomology(c, &site.cd, &az, whole, 1).unwrap();
        assert_eq!(h[0], FgAbGroup::free(1));
        assert_eq!(h[1], FgAbGroup::free(1));
    }

    #[test]
    fn refinement_map_independence_on_circle() {
        // two refinement choices between the same pair of families
        // induce the same map on H^1
        let space = fixtures::circle_space();
        let site = fixtures::open_site(&space);
        let c = &site.cat;
        let top = cd_topology(c, &site.cd).unwrap();
        let z = AbPresheaf::constant(c, FgAbGroup::free(1));
        let az = ab_sheafify(c, &top, &z).presheaf;
        let whole = site.object_of(&vec![true; space.points()]).unwrap();
        let sc = simple_coverings(c, &site.cd);
        let fams: Vec<Vec<MorId>> = sc.families[&whole]
            .iter()
            .map(|fam| fam.iter().copied().collect())
            .collect();
        let mut checked = 0;
        for coarse in &fams {
            for fine in &fams {
                let Some(choice) = refinement(c, coarse, fine) else {
                    continue;
                };
                // enumerate alternative choices by re-picking per member
                let alts: Vec<Vec<(usize, MorId)>> = fine
                    .iter()
                    .map(|&v| {
                        let mut opts = Vec::new();
                        for (i, &u) in coarse.iter().enumerate() {
                            for w in c.hom(c.src(v), c.src(u)) {
                                if c.compose(u, w) == v {
                                    opts.push((i, w));
                                }
                            }
                        }
                        opts
                    })
                    .collect();
                // a second choice: take the last option per member
                let alt: Vec<(usize, MorId)> =
                    alts.iter().map(|o| *o.last().unwrap()).collect();
                if alt == choice {
                    continue;
                }
                let cx_coarse = cech_complex(c, &az, coarse, 2).unwrap();
                let cx_fine = cech_complex(c, &az, fine, 2).unwrap();
                for n in 0..=1usize {
                    let h_coarse = cech_h_with_reps(&cx_coarse, n);
                    let h_fine = cech_h_with_reps(&cx_fine, n);
                    let m1 =
                        refinement_chain_map(c, &az, coarse, fine, &choice, n).unwrap();
                    let m2 = refinement_chain_map(c, &az, coarse, fine, &alt, n).unwrap();
                    for j in 0..gens_of(&h_coarse.group) {
                        let rep = h_coarse.reps.column(j);
                        let a = h_fine.express(&m1.apply(&rep)).unwrap();
                        let b = h_fine.express(&m2.apply(&rep)).unwrap();
                        // equal modulo torsion relations of h_fine
                        let diff: Vec<i64> =
                            a.iter().zip(&b).map(|(&x, &y)| x - y).collect();
                        let rel = relations_of(&h_fine.group);
                        let snf = crate::abelian::smith_normal_form(&rel);
                        assert!(
                            crate::abelian::solve(&rel, &diff, &snf).is_some(),
                            "refinement maps disagree on H^{n}"
                        );
                    }
                }
                checked += 1;
            }
        }
        assert!(checked > 0, "no pair with distinct refinement choices");
    }
}
