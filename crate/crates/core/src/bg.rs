//! B.G.-functors: truncated towers of pointed presheaves with
//! square-indexed boundary maps, and the desk-scale conformance check
//! of the descent theorem (trivial sheafification forces trivial
//! levels on bounded complete cd-structures).

use crate::density::{is_bounded, DensityStructure};
use crate::fincat::FiniteCategory;
use crate::presheaf::SetPresheaf;
use crate::sheaf::sheafify;
use crate::topology::{cd_topology, is_complete, square_morphisms, CdStructure};

/// A presheaf of pointed sets: underlying presheaf plus basepoints.
#[derive(Debug, Clone)]
pub struct PointedPresheaf {
    pub presheaf: SetPresheaf,
    /// Basepoint index per object.
    pub base: Vec<usize>,
}

impl PointedPresheaf {
    /// The constant one-point presheaf.
    pub fn point(cat: &FiniteCategory) -> Self {
        PointedPresheaf {
            presheaf: SetPresheaf::point(cat),
            base: vec![0; cat.object_count()],
        }
    }

    pub fn validate(&self, cat: &FiniteCategory) -> Result<(), String> {
        self.presheaf.validate(cat)?;
        for u in cat.objects() {
            if self.base[u.0] >= self.presheaf.size(u) {
                return Err(format!("basepoint out of range at `{}`", cat.object_name(u)));
            }
        }
        for m in cat.morphisms() {
            if self.presheaf.res(m, self.base[cat.dst(m).0]) != self.base[cat.src(m).0] {
                return Err(format!(
                    "restriction along `{}` moves the basepoint",
                    cat.morphism_name(m)
                ));
            }
        }
        Ok(())
    }

    pub fn is_trivial(&self, cat: &FiniteCategory) -> bool {
        cat.objects().all(|u| self.presheaf.size(u) == 1)
    }
}

/// A truncated B.G.-functor: levels T_0..T_N and, per stored
/// distinguished square Q and level q < N, the pointed boundary
/// ∂_Q: T_{q+1}(B) → T_q(X).
#[derive(Debug, Clone)]
pub struct BGFunctor {
    pub levels: Vec<PointedPresheaf>,
    /// boundaries[q][square index][element of T_{q+1}(B)] ∈ T_q(X).
    pub boundaries: Vec<Vec<Vec<usize>>>,
}

impl BGFunctor {
    /// The all-point tower with the only possible boundaries.
    pub fn trivial(cat: &FiniteCategory, cd: &CdStructure, n: usize) -> Self {
        BGFunctor {
            levels: vec![PointedPresheaf::point(cat); n + 1],
            boundaries: vec![vec![vec![0]; cd.squares().len()]; n],
        }
    }

    /// Checks both B.G.-functor conditions on the truncated data:
    /// boundaries are pointed and natural in square morphisms, and the
    /// three-term sequence is exact at T_q(X) for every q < N.
    pub fn validate(&self, cat: &FiniteCategory, cd: &CdStructure) -> Result<(), String> {
        if self.levels.is_empty() || self.boundaries.len() + 1 != self.levels.len() {
            return Err("levels/boundaries length mismatch".into());
        }
        for (q, t) in self.levels.iter().enumerate() {
            t.validate(cat).map_err(|e| format!("level {q}: {e}"))?;
        }
        let squares = cd.squares();
        for (q, row) in self.boundaries.iter().enumerate() {
            if row.len() != squares.len() {
                return Err(format!("level {q} must carry one boundary per square"));
            }
            let tq = &self.levels[q];
            let tq1 = &self.levels[q + 1];
            for (si, bdry) in row.iter().enumerate() {
                let sq = &squares[si];
                let (b, x) = (sq.corner_b(cat), sq.corner_x(cat));
                if bdry.len() != tq1.presheaf.size(b) {
                    return Err(format!("∂ of square {si} at level {q} has the wrong domain"));
                }
                if bdry.iter().any(|&v| v >= tq.presheaf.size(x)) {
                    return Err(format!("∂ of square {si} at level {q} leaves its codomain"));
                }
                if bdry[tq1.base[b.0]] != tq.base[x.0] {
                    return Err(format!("∂ of square {si} at level {q} is not pointed"));
                }
                // exactness at T_q(X): preimage of the basepoint under
                // (T_q(e), T_q(p)) equals the image of ∂_Q
                let to_a = sq.e;
                let to_y = sq.p;
                let (a, y) = (sq.corner_a(cat), sq.corner_y(cat));
                for v in 0..tq.presheaf.size(x) {
                    let killed = tq.presheaf.res(to_a, v) == tq.base[a.0]
                        && tq.presheaf.res(to_y, v) == tq.base[y.0];
                    let hit = bdry.contains(&v);
                    if killed != hit {
                        return Err(format!(
                            "sequence not exact at T_{q}(X) for square {si} (element {v})"
                        ));
                    }
                }
            }
            // naturality over morphisms of stored distinguished squares
            for (si, sq_s) in squares.iter().enumerate() {
                for (ti, sq_t) in squares.iter().enumerate() {
                    for sm in square_morphisms(cat, sq_s, sq_t) {
                        let bs = sq_s.corner_b(cat);
                        for v in 0..tq1.presheaf.size(sq_t.corner_b(cat)) {
                            let lhs = tq.presheaf.res(sm.on_x, row[ti][v]);
                            let rhs = row[si][tq1.presheaf.res(sm.on_b, v)];
                            if lhs != rhs {
                                return Err(format!(
                                    "∂ not natural for squares {si} → {ti} at level {q} \
                                     (element {v} of T_{}({}))",
                                    q + 1,
                                    cat.object_name(bs)
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The descent-theorem conformance check. Preconditions: P complete
/// and bounded for the supplied density structure. Hypotheses: every
/// level has trivial sheafification and a one-point value on the
/// initial object. Conclusion asserted: T_q = pt for q ≤ N−1 (the top
/// level is excluded — its exactness input is outside the truncation).
pub fn bg_check(
    cat: &FiniteCategory,
    cd: &CdStructure,
    d: &DensityStructure,
    t: &BGFunctor,
) -> Result<bool, String> {
    if !is_complete(cat, cd).map_err(|e| e.to_string())?.is_complete() {
        return Err("precondition failed: the cd-structure is not complete".into());
    }
    if !is_bounded(cat, cd, d).is_bounded() {
        return Err("precondition failed: the cd-structure is not bounded".into());
    }
    t.validate(cat, cd)?;
    let top = cd_topology(cat, cd).map_err(|e| e.to_string())?;
    let initial = cat
        .objects()
        .find(|&o| cat.is_strict_initial(o))
        .ok_or("no strict initial object")?;
    for (q, level) in t.levels.iter().enumerate() {
        if level.presheaf.size(initial) != 1 {
            return Err(format!("hypothesis not met: T_{q}(∅) is not a point"));
        }
        let sh = sheafify(cat, &top, &level.presheaf);
        if cat.objects().any(|u| sh.sheaf().size(u) != 1) {
            return Err(format!("hypothesis not met: aT_{q} is not trivial"));
        }
    }
    Ok(t
        .levels
        .iter()
        .take(t.levels.len() - 1)
        .all(|l| l.is_trivial(cat)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    /// A pointed presheaf on the toy site that is not the point but has
    /// trivial sheafification: an extra element at X only.
    fn toy_top_level(toy: &fixtures::ToySite) -> PointedPresheaf {
        let cat = &toy.cat;
        let sizes: Vec<usize> = cat
            .objects()
            .map(|u| if u == toy.o_x { 2 } else { 1 })
            .collect();
        let restrict: Vec<Vec<usize>> = cat
            .morphisms()
            .map(|m| (0..sizes[cat.dst(m).0]).map(|v| v.min(sizes[cat.src(m).0] - 1)).collect())
            .collect();
        PointedPresheaf {
            presheaf: SetPresheaf { sizes, restrict },
            base: vec![0; cat.object_count()],
        }
    }

    #[test]
    fn trivial_tower_passes() {
        let toy = fixtures::toy_site();
        let d = fixtures::toy_density(&toy);
        let t = BGFunctor::trivial(&toy.cat, &toy.cd, 3);
        assert!(bg_check(&toy.cat, &toy.cd, &d, &t).unwrap());
    }

    #[test]
    fn toy_witness_with_nontrivial_top_level() {
        let toy = fixtures::toy_site();
        let d = fixtures::toy_density(&toy);
        let top_level = toy_top_level(&toy);
        top_level.validate(&toy.cat).unwrap();
        assert!(!top_level.is_trivial(&toy.cat));
        let n = 2;
        let mut t = BGFunctor::trivial(&toy.cat, &toy.cd, n);
        t.levels[n] = top_level;
        // boundaries from the new top level: T_n(B) = pt for every
        // square corner B, so the all-zero maps still apply
        assert!(bg_check(&toy.cat, &toy.cd, &d, &t).unwrap());
    }

    #[test]
    fn exactness_violation_is_rejected() {
        let toy = fixtures::toy_site();
        let n = 2;
        let mut t = BGFunctor::trivial(&toy.cat, &toy.cd, n);
        // put the nontrivial presheaf at level 0: its element 1 at X
        // dies on A and Y but is not hit by any boundary
        t.levels[0] = toy_top_level(&toy);
        let err = t.validate(&toy.cat, &toy.cd).unwrap_err();
        assert!(err.contains("not exact"), "{err}");
    }

    #[test]
    fn non_pointed_boundary_rejected() {
        let toy = fixtures::toy_site();
        let t = BGFunctor {
            levels: vec![PointedPresheaf::point(&toy.cat); 2],
            boundaries: vec![vec![vec![1]; toy.cd.squares().len()]],
        };
        assert!(t.validate(&toy.cat, &toy.cd).is_err());
    }
}
