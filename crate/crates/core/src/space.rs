//! Finite T0 spaces as specialization posets: cohomology of diagrams of
//! abelian groups over the poset (the derived-limit complex over strict
//! chains), and recognition of a finite site as the open-set site of a
//! finite space.
//!
//! For a sheaf on a finite space the stalk at x is the value at the
//! minimal open set U_x, the stalks form a covariant diagram over the
//! specialization order (x ≤ y gives F_x → F_y by restriction along
//! U_y ⊆ U_x), global sections are the limit of this diagram, and sheaf
//! cohomology is computed by the cochain complex
//! C^n = ∏_{x_0 < … < x_n} F(x_n) with the usual alternating-face
//! differential (the last face uses the diagram map F_{x_n} → F_{x_{n+1}}).

use std::collections::BTreeMap;

use crate::abelian::{FgAbGroup, Mat, PresentedComplex};
use crate::absheaf::{gens_of, relations_of, AbPresheaf};
use crate::fincat::{FiniteCategory, ObjId};
use crate::fixtures::{FiniteSpace, OpenSite};
use crate::topology::{cd_topology, sieve_generated_by, CdStructure};

/// A covariant diagram of f.g. abelian groups over the specialization
/// poset of a finite space, with a matrix for every comparable pair.
#[derive(Debug, Clone)]
pub struct StalkDiagram {
    pub groups: Vec<FgAbGroup>,
    /// maps[(x, y)] for x ≤ y: generators of groups[x] → generators of
    /// groups[y].
    pub maps: BTreeMap<(usize, usize), Mat>,
}

impl StalkDiagram {
    pub fn constant(space: &FiniteSpace, g: FgAbGroup) -> StalkDiagram {
        let n = gens_of(&g);
        let mut maps = BTreeMap::new();
        for x in 0..space.points() {
            for y in 0..space.points() {
                if space.leq[x][y] {
                    maps.insert((x, y), Mat::identity(n));
                }
            }
        }
        StalkDiagram {
            groups: vec![g; space.points()],
            maps,
        }
    }
}

/// The stalk diagram of an abelian presheaf on the open-set site of a
/// finite space: F_x = F(U_x).
pub fn stalk_diagram(site: &OpenSite, f: &AbPresheaf) -> StalkDiagram {
    let space = &site.space;
    let point_obj: Vec<ObjId> = (0..space.points())
        .map(|x| {
            let mut set = vec![false; space.points()];
            for y in space.up_set(x) {
                set[y] = true;
            }
            site.object_of(&set).expect("minimal open set is an object")
        })
        .collect();
    let mut maps = BTreeMap::new();
    for x in 0..space.points() {
        for y in 0..space.points() {
            if space.leq[x][y] {
                // U_y ⊆ U_x: the inclusion morphism restricts
                // F(U_x) → F(U_y)
                let m = site.cat.hom(point_obj[y], point_obj[x])[0];
                maps.insert((x, y), f.res(m).clone());
            }
        }
    }
    StalkDiagram {
        groups: (0..space.points())
            .map(|x| f.groups[point_obj[x].0].clone())
            .collect(),
        maps,
    }
}

/// All strict chains of length n+1 inside `subset`, in lexicographic
/// order of point indices.
pub fn chains(space: &FiniteSpace, subset: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(
        space: &FiniteSpace,
        subset: &[usize],
        n: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == n + 1 {
            out.push(current.clone());
            return;
        }
        for &x in subset {
            if let Some(&last) = current.last() {
                if !(space.leq[last][x] && last != x) {
                    continue;
                }
            }
            current.push(x);
            rec(space, subset, n, current, out);
            current.pop();
        }
    }
    rec(space, subset, n, &mut current, &mut out);
    out
}

/// The length of the longest strict chain minus one (the top degree in
/// which the complex can be nonzero).
pub fn max_chain_degree(space: &FiniteSpace, subset: &[usize]) -> usize {
    let mut n = 0;
    while !chains(space, subset, n + 1).is_empty() {
        n += 1;
    }
    n
}

/// The derived-limit cochain complex of the diagram over the points of
/// `subset`, in degrees 0..=max_n, together with the chain lists
/// indexing the generators of each degree.
pub fn poset_complex(
    space: &FiniteSpace,
    diagram: &StalkDiagram,
    subset: &[usize],
    max_n: usize,
) -> (PresentedComplex, Vec<Vec<Vec<usize>>>) {
    let all_chains: Vec<Vec<Vec<usize>>> = (0..=max_n)
        .map(|n| chains(space, subset, n))
        .collect();
    let offsets: Vec<Vec<usize>> = all_chains
        .iter()
        .map(|cs| {
            let mut off = Vec::with_capacity(cs.len());
            let mut total = 0;
            for c in cs {
                off.push(total);
                total += gens_of(&diagram.groups[*c.last().unwrap()]);
            }
            off
        })
        .collect();
    let gens: Vec<usize> = all_chains
        .iter()
        .map(|cs| {
            cs.iter()
                .map(|c| gens_of(&diagram.groups[*c.last().unwrap()]))
                .sum()
        })
        .collect();
    let rels: Vec<Mat> = all_chains
        .iter()
        .enumerate()
        .map(|(n, cs)| {
            let cols: usize = cs
                .iter()
                .map(|c| diagram.groups[*c.last().unwrap()].torsion.len())
                .sum();
            let mut r = Mat::zero(gens[n], cols);
            let mut co = 0;
            for (ci, c) in cs.iter().enumerate() {
                let rel = relations_of(&diagram.groups[*c.last().unwrap()]);
                for i in 0..rel.rows {
                    for j in 0..rel.cols {
                        r.set(offsets[n][ci] + i, co + j, rel.get(i, j));
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
        for (ci, c) in all_chains[n + 1].iter().enumerate() {
            let tgt_off = offsets[n + 1][ci];
            let tgt_gens = gens_of(&diagram.groups[*c.last().unwrap()]);
            for omit in 0..c.len() {
                let face: Vec<usize> = c
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != omit)
                    .map(|(_, &x)| x)
                    .collect();
                let fi = all_chains[n]
                    .iter()
                    .position(|other| *other == face)
                    .expect("face of a chain is a chain");
                let src_off = offsets[n][fi];
                let sign = if omit % 2 == 0 { 1 } else { -1 };
                if omit < c.len() - 1 {
                    // the face keeps the last point: identity coefficient
                    for i in 0..tgt_gens {
                        let v = d.get(tgt_off + i, src_off + i) + sign;
                        d.set(tgt_off + i, src_off + i, v);
                    }
                } else {
                    // last face: transport along x_n ≤ x_{n+1}
                    let m = &diagram.maps[&(c[c.len() - 2], c[c.len() - 1])];
                    for i in 0..m.rows {
                        for j in 0..m.cols {
                            let v = d.get(tgt_off + i, src_off + j) + sign * m.get(i, j);
                            d.set(tgt_off + i, src_off + j, v);
                        }
                    }
                }
            }
        }
        diff.push(d);
    }
    (PresentedComplex { gens, rels, diff }, all_chains)
}

/// H^n(subset, diagram) for n = 0..=max_n.
pub fn poset_cohomology(
    space: &FiniteSpace,
    diagram: &StalkDiagram,
    subset: &[usize],
    max_n: usize,
) -> Vec<FgAbGroup> {
    let top = max_chain_degree(space, subset).max(max_n);
    let (cx, _) = poset_complex(space, diagram, subset, top + 1);
    (0..=max_n).map(|n| cx.cohomology(n)).collect()
}

/// A finite site recognized as the open-set site of a finite space.
#[derive(Debug, Clone)]
pub struct OpenSiteRecognition {
    pub space: FiniteSpace,
    /// The object representing the minimal open set of each point.
    pub point_objects: Vec<ObjId>,
    /// Point membership of every object's open set.
    pub object_points: Vec<Vec<bool>>,
}

/// Attempts to identify (cat, cd) as the site of open sets of a finite
/// T0 space with the standard open-cover topology: the category must be
/// a bounded lattice poset whose join-irreducible elements behave like
/// points (the point sets of joins and meets are unions and
/// intersections, point sets classify objects, every up-set of points
/// occurs), and the minimum covering sieve of every object must be
/// generated by the inclusions of the minimal opens of its points.
pub fn recognize_open_site(cat: &FiniteCategory, cd: &CdStructure) -> Option<OpenSiteRecognition> {
    let nobj = cat.object_count();
    // poset with antisymmetry
    for u in cat.objects() {
        for v in cat.objects() {
            if cat.hom(u, v).len() > 1 {
                return None;
            }
            if u != v && !cat.hom(u, v).is_empty() && !cat.hom(v, u).is_empty() {
                return None;
            }
        }
    }
    let le = |u: ObjId, v: ObjId| !cat.hom(u, v).is_empty();
    // bottom element
    let bottom = cat.objects().find(|&o| cat.objects().all(|v| le(o, v)))?;
    // meets and joins
    let meet = |u: ObjId, v: ObjId| -> Option<ObjId> {
        cat.objects()
            .filter(|&w| le(w, u) && le(w, v))
            .find(|&w| cat.objects().all(|t| !(le(t, u) && le(t, v)) || le(t, w)))
    };
    let join = |u: ObjId, v: ObjId| -> Option<ObjId> {
        cat.objects()
            .filter(|&w| le(u, w) && le(v, w))
            .find(|&w| cat.objects().all(|t| !(le(u, t) && le(v, t)) || le(w, t)))
    };
    for u in cat.objects() {
        for v in cat.objects() {
            meet(u, v)?;
            join(u, v)?;
        }
    }
    // join-irreducible objects are the points
    let mut points: Vec<ObjId> = Vec::new();
    for u in cat.objects() {
        if u == bottom {
            continue;
        }
        let mut irreducible = true;
        'pairs: for a in cat.objects() {
            for b in cat.objects() {
                if a != u && b != u && join(a, b) == Some(u) {
                    irreducible = false;
                    break 'pairs;
                }
            }
        }
        if irreducible {
            points.push(u);
        }
    }
    if points.len() > 20 {
        return None; // up-set enumeration would be too large
    }
    // specialization order: x ≤ y iff U_y ⊆ U_x
    let np = points.len();
    let mut leq = vec![vec![false; np]; np];
    for x in 0..np {
        for y in 0..np {
            leq[x][y] = le(points[y], points[x]);
        }
    }
    let space = FiniteSpace {
        point_names: points
            .iter()
            .map(|&p| cat.object_name(p).to_string())
            .collect(),
        leq,
    };
    let pts_of = |u: ObjId| -> Vec<bool> { points.iter().map(|&p| le(p, u)).collect() };
    let object_points: Vec<Vec<bool>> = cat.objects().map(pts_of).collect();
    // point sets classify objects
    for u in cat.objects() {
        for v in cat.objects() {
            if u != v && object_points[u.0] == object_points[v.0] {
                return None;
            }
        }
    }
    // every open set of the space is realized
    let all_opens = space.open_sets();
    if all_opens.len() != nobj {
        return None;
    }
    for o in &all_opens {
        if !object_points.iter().any(|p| p == o) {
            return None;
        }
    }
    // joins are unions (meets are intersections automatically)
    for u in cat.objects() {
        for v in cat.objects() {
            let j = join(u, v).unwrap();
            let union: Vec<bool> = object_points[u.0]
                .iter()
                .zip(&object_points[v.0])
                .map(|(&a, &b)| a || b)
                .collect();
            if object_points[j.0] != union {
                return None;
            }
        }
    }
    // the cd-topology must be the open-cover topology: the minimum
    // covering sieve of U is generated by the inclusions U_x → U
    let top = cd_topology(cat, cd).ok()?;
    for u in cat.objects() {
        let incls: Vec<_> = points
            .iter()
            .filter(|&&p| le(p, u))
            .map(|&p| cat.hom(p, u)[0])
            .collect();
        let canonical = sieve_generated_by(cat, u, &incls);
        if &canonical != top.min_covering_sieve(u) {
            return None;
        }
    }
    Some(OpenSiteRecognition {
        space,
        point_objects: points,
        object_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::topology::cd_topology;

    fn all_points(space: &FiniteSpace) -> Vec<usize> {
        (0..space.points()).collect()
    }

    #[test]
    fn circle_constant_cohomology() {
        let space = fixtures::circle_space();
        let d = StalkDiagram::constant(&space, FgAbGroup::free(1));
        let h = poset_cohomology(&space, &d, &all_points(&space), 2);
        assert_eq!(h[0], FgAbGroup::free(1));
        assert_eq!(h[1], FgAbGroup::free(1));
        assert_eq!(h[2], FgAbGroup::zero());
    }

    #[test]
    fn sphere_constant_cohomology() {
        let space = fixtures::sphere2_space();
        let d = StalkDiagram::constant(&space, FgAbGroup::free(1));
        let h = poset_cohomology(&space, &d, &all_points(&space), 3);
        assert_eq!(h[0], FgAbGroup::free(1));
        assert_eq!(h[1], FgAbGroup::zero());
        assert_eq!(h[2], FgAbGroup::free(1));
        assert_eq!(h[3], FgAbGroup::zero());
    }

    #[test]
    fn point_space_cohomology() {
        let space = FiniteSpace {
            point_names: vec!["pt".into()],
            leq: vec![vec![true]],
        };
        let d = StalkDiagram::constant(
            &space,
            FgAbGroup {
                rank: 2,
                torsion: vec![3],
            },
        );
        let h = poset_cohomology(&space, &d, &[0], 2);
        assert_eq!(
            h[0],
            FgAbGroup {
                rank: 2,
                torsion: vec![3]
            }
        );
        assert_eq!(h[1], FgAbGroup::zero());
    }

    #[test]
    fn recognize_toy_as_three_point_space() {
        let toy = fixtures::toy_site();
        let rec = recognize_open_site(&toy.cat, &toy.cd).expect("toy is an open-set site");
        assert_eq!(rec.space.points(), 3);
        // two open points above one generic? no: B is the minimum of
        // A and Y, so the B-point is above both others
        let names = &rec.space.point_names;
        assert!(names.contains(&"A".to_string()));
        assert!(names.contains(&"Y".to_string()));
        assert!(names.contains(&"B".to_string()));
        // toy space is contractible: H^0 = Z, H^1 = 0
        let d = StalkDiagram::constant(&rec.space, FgAbGroup::free(1));
        let h = poset_cohomology(&rec.space, &d, &all_points(&rec.space), 2);
        assert_eq!(h[0], FgAbGroup::free(1));
        assert_eq!(h[1], FgAbGroup::zero());
        assert_eq!(h[2], FgAbGroup::zero());
    }

    #[test]
    fn recognize_circle_site_and_compute_via_stalks() {
        let space = fixtures::circle_space();
        let site = fixtures::open_site(&space);
        let rec = recognize_open_site(&site.cat, &site.cd).expect("open site recognized");
        assert_eq!(rec.space.points(), 4);
        // sheafified constant Z has constant stalks Z
        let c = &site.cat;
        let top = cd_topology(c, &site.cd).unwrap();
        let z = crate::absheaf::AbPresheaf::constant(c, FgAbGroup::free(1));
        let az = crate::absheaf::ab_sheafify(c, &top, &z).presheaf;
        let d = stalk_diagram(&site, &az);
        for g in &d.groups {
            assert_eq!(*g, FgAbGroup::free(1));
        }
        let h = poset_cohomology(&site.space, &d, &all_points(&site.space), 2);
        assert_eq!(h[0], FgAbGroup::free(1));
        assert_eq!(h[1], FgAbGroup::free(1));
        assert_eq!(h[2], FgAbGroup::zero());
    }

    #[test]
    fn toy_not_recognized_without_squares() {
        // with an empty cd-structure the topology is trivial and the
        // minimum sieves are maximal sieves, not point covers
        let toy = fixtures::toy_site();
        let empty = CdStructure::new(Vec::new());
        assert!(recognize_open_site(&toy.cat, &empty).is_none());
    }
}
