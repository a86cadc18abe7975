//! Truncated simplicial objects in the formal-sum completion of a
//! finite category: K_Q, Čech nerves, simplicial homotopies, π₀ and
//! the π₀-level check of the generating weak equivalences.
//!
//! All simplicial data is truncated at a chosen level N; every check
//! here (simplicial identities, homotopy identities, π₀) only involves
//! levels up to N.

use crate::cech::{iterated_pullback, mediate_into, IteratedPullback};
use crate::fincat::{CoprodMap, FiniteCategory, FormalCoproduct, MorId, ObjId};
use crate::presheaf::{yoneda, PresheafMorphism, SetPresheaf};
use crate::sheaf::{sheafify, sheafify_morphism};
use crate::topology::{DistinguishedSquare, Topology};
use crate::util::cartesian;

/// A simplicial object truncated at level N: levels 0..=N with all
/// faces and degeneracies between them.
#[derive(Debug, Clone)]
pub struct TruncatedSimplicialObject {
    pub truncation: usize,
    /// levels[n] for n in 0..=N.
    pub levels: Vec<FormalCoproduct>,
    /// faces[n][i] = d_i: level n → level n−1, for 1 ≤ n ≤ N, 0 ≤ i ≤ n.
    /// faces[0] is empty.
    pub faces: Vec<Vec<CoprodMap>>,
    /// degens[n][i] = s_i: level n → level n+1, for 0 ≤ n < N, 0 ≤ i ≤ n.
    /// degens[N] is empty.
    pub degens: Vec<Vec<CoprodMap>>,
}

impl TruncatedSimplicialObject {
    /// The constant simplicial object on a single object.
    pub fn constant(cat: &FiniteCategory, o: ObjId, n: usize) -> Self {
        let level = FormalCoproduct::single(o);
        let id = |k: usize| {
            (0..k)
                .map(|_| CoprodMap::identity(&level, cat))
                .collect::<Vec<_>>()
        };
        TruncatedSimplicialObject {
            truncation: n,
            levels: vec![level.clone(); n + 1],
            faces: (0..=n).map(|m| if m == 0 { vec![] } else { id(m + 1) }).collect(),
            degens: (0..=n).map(|m| if m == n { vec![] } else { id(m + 1) }).collect(),
        }
    }

    /// Checks well-formedness and every simplicial identity available
    /// within the truncation.
    pub fn check_identities(&self, cat: &FiniteCategory) -> Result<(), String> {
        let nn = self.truncation;
        if self.levels.len() != nn + 1 {
            return Err("wrong number of levels".into());
        }
        for n in 1..=nn {
            if self.faces[n].len() != n + 1 {
                return Err(format!("level {n} must have {} faces", n + 1));
            }
            for (i, d) in self.faces[n].iter().enumerate() {
                if !d.is_valid(cat, &self.levels[n], &self.levels[n - 1]) {
                    return Err(format!("d_{i} at level {n} is not a valid map"));
                }
            }
        }
        for n in 0..nn {
            if self.degens[n].len() != n + 1 {
                return Err(format!("level {n} must have {} degeneracies", n + 1));
            }
            for (i, s) in self.degens[n].iter().enumerate() {
                if !s.is_valid(cat, &self.levels[n], &self.levels[n + 1]) {
                    return Err(format!("s_{i} at level {n} is not a valid map"));
                }
            }
        }
        // d_i d_j = d_{j−1} d_i for i < j, on levels n ≥ 2
        for n in 2..=nn {
            for j in 0..=n {
                for i in 0..j {
                    let lhs = self.faces[n - 1][i].compose(cat, &self.faces[n][j]);
                    let rhs = self.faces[n - 1][j - 1].compose(cat, &self.faces[n][i]);
                    if lhs != rhs {
                        return Err(format!("d_{i} d_{j} ≠ d_{} d_{i} at level {n}", j - 1));
                    }
                }
            }
        }
        // s_i s_j = s_{j+1} s_i for i ≤ j, from level n to n+2
        for n in 0..nn.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = self.degens[n + 1][i].compose(cat, &self.degens[n][j]);
                    let rhs = self.degens[n + 1][j + 1].compose(cat, &self.degens[n][i]);
                    if lhs != rhs {
                        return Err(format!("s_{i} s_{j} ≠ s_{} s_{i} at level {n}", j + 1));
                    }
                }
            }
        }
        // d_i s_j relations, from level n through n+1 back to n or n±…
        for n in 0..nn {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = self.faces[n + 1][i].compose(cat, &self.degens[n][j]);
                    let rhs = if i == j || i == j + 1 {
                        CoprodMap::identity(&self.levels[n], cat)
                    } else if i < j {
                        // needs s_{j−1} on level n−1 after d_i
                        self.degens[n - 1][j - 1].compose(cat, &self.faces[n][i])
                    } else {
                        self.degens[n - 1][j].compose(cat, &self.faces[n][i - 1])
                    };
                    if lhs != rhs {
                        return Err(format!("d_{i} s_{j} identity fails at level {n}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A levelwise map of truncated simplicial objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMap {
    pub levels: Vec<CoprodMap>,
}

impl SimplicialMap {
    pub fn is_simplicial(
        &self,
        cat: &FiniteCategory,
        src: &TruncatedSimplicialObject,
        dst: &TruncatedSimplicialObject,
    ) -> bool {
        let nn = src.truncation.min(dst.truncation);
        if self.levels.len() != nn + 1 {
            return false;
        }
        for n in 0..=nn {
            if !self.levels[n].is_valid(cat, &src.levels[n], &dst.levels[n]) {
                return false;
            }
        }
        for n in 1..=nn {
            for i in 0..=n {
                let lhs = self.levels[n - 1].compose(cat, &src.faces[n][i]);
                let rhs = dst.faces[n][i].compose(cat, &self.levels[n]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        for n in 0..nn {
            for i in 0..=n {
                let lhs = self.levels[n + 1].compose(cat, &src.degens[n][i]);
                let rhs = dst.degens[n][i].compose(cat, &self.levels[n]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// Which of the three corner objects a K_Q summand is; level n has
/// summands indexed by t ∈ 0..=n+1 (t = 0 is Y, t = n+1 is A, the rest
/// are copies of B). The index t counts leading A-coordinates of the
/// monotone tuple the summand stands for.
fn kq_summand(q: &DistinguishedSquare, cat: &FiniteCategory, n: usize, t: usize) -> ObjId {
    if t == 0 {
        q.corner_y(cat)
    } else if t == n + 1 {
        q.corner_a(cat)
    } else {
        q.corner_b(cat)
    }
}

/// The simplicial object K_Q of a square Q = (B; A, Y; X), truncated at
/// N, together with the projection p_Q to the constant object X.
/// Level n is A ⊔ B^{⊔n} ⊔ Y.
pub fn build_kq(
    cat: &FiniteCategory,
    q: &DistinguishedSquare,
    n_max: usize,
) -> (TruncatedSimplicialObject, SimplicialMap) {
    let levels: Vec<FormalCoproduct> = (0..=n_max)
        .map(|n| FormalCoproduct::new((0..=n + 1).map(|t| kq_summand(q, cat, n, t)).collect()))
        .collect();
    // summand type: 0 = Y, 1 = B, 2 = A
    let typ = |n: usize, t: usize| { if t == 0 { 0 } else if t == n + 1 { 2 } else { 1 } };
    // the connecting morphism of a structure map between summands;
    // only B→A, B→Y and same-type transitions occur
    let connect = |n_src: usize, t_src: usize, n_dst: usize, t_dst: usize| -> MorId {
        match (typ(n_src, t_src), typ(n_dst, t_dst)) {
            (s, d) if s == d => cat.identity(kq_summand(q, cat, n_src, t_src)),
            (1, 2) => q.b_to_a,
            (1, 0) => q.b_to_y,
            other => unreachable!("impossible K_Q transition {other:?}"),
        }
    };
    let mut faces = vec![Vec::new()];
    for n in 1..=n_max {
        let mut row = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let components = (0..=n + 1)
                .map(|t| {
                    let tp = if i < t { t - 1 } else { t };
                    (tp, connect(n, t, n - 1, tp))
                })
                .collect();
            row.push(CoprodMap { components });
        }
        faces.push(row);
    }
    let mut degens = Vec::new();
    for n in 0..n_max {
        let mut row = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let components = (0..=n + 1)
                .map(|t| {
                    let tp = if i < t { t + 1 } else { t };
                    (tp, connect(n, t, n + 1, tp))
                })
                .collect();
            row.push(CoprodMap { components });
        }
        degens.push(row);
    }
    degens.push(Vec::new());
    let kq = TruncatedSimplicialObject {
        truncation: n_max,
        levels,
        faces,
        degens,
    };
    // p_Q: A → X by e, Y → X by p, B → X by e ∘ b_to_a
    let to_x = cat.compose(q.e, q.b_to_a);
    let p_q = SimplicialMap {
        levels: (0..=n_max)
            .map(|n| CoprodMap {
                components: (0..=n + 1)
                    .map(|t| {
                        let m = if t == n + 1 {
                            q.e
                        } else if t == 0 {
                            q.p
                        } else {
                            to_x
                        };
                        (0, m)
                    })
                    .collect(),
            })
            .collect(),
    };
    (kq, p_q)
}

/// The Čech nerve of f: X → Y truncated at N (level n = X^{n+1}_Y) with
/// η(f) to the constant object Y, or None when a fiber power is
/// missing.
pub fn cech_nerve(
    cat: &FiniteCategory,
    f: MorId,
    n_max: usize,
) -> Option<(TruncatedSimplicialObject, SimplicialMap)> {
    let family = [f];
    let pbs: Vec<IteratedPullback> = (0..=n_max)
        .map(|n| iterated_pullback(cat, &family, &vec![0; n + 1]))
        .collect::<Option<_>>()?;
    let levels: Vec<FormalCoproduct> = pbs
        .iter()
        .map(|pb| FormalCoproduct::single(pb.apex))
        .collect();
    let mut faces = vec![Vec::new()];
    for n in 1..=n_max {
        let mut row = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let factor_maps: Vec<MorId> = (0..=n)
                .filter(|&k| k != i)
                .map(|k| pbs[n].projections[k])
                .collect();
            let m = mediate_into(cat, &pbs[n - 1], &factor_maps)?;
            row.push(CoprodMap {
                components: vec![(0, m)],
            });
        }
        faces.push(row);
    }
    let mut degens = Vec::new();
    for n in 0..n_max {
        let mut row = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let factor_maps: Vec<MorId> = (0..=n + 1)
                .map(|k| pbs[n].projections[if k <= i { k } else { k - 1 }])
                .collect();
            let m = mediate_into(cat, &pbs[n + 1], &factor_maps)?;
            row.push(CoprodMap {
                components: vec![(0, m)],
            });
        }
        degens.push(row);
    }
    degens.push(Vec::new());
    let nerve = TruncatedSimplicialObject {
        truncation: n_max,
        levels,
        faces,
        degens,
    };
    let eta = SimplicialMap {
        levels: pbs
            .iter()
            .map(|pb| CoprodMap {
                components: vec![(0, pb.to_base)],
            })
            .collect(),
    };
    Some((nerve, eta))
}

/// A simplicial homotopy from `from` to `to`: maps h_i: level n →
/// level n+1 with d_0 h_0 = from, d_{n+1} h_n = to.
#[derive(Debug, Clone)]
pub struct SimplicialHomotopy {
    /// h[n][i] for 0 ≤ n < truncation of the source, 0 ≤ i ≤ n.
    pub h: Vec<Vec<CoprodMap>>,
}

impl SimplicialHomotopy {
    /// Verifies every homotopy identity available within the
    /// truncation (levels 0..N−1 of the source carry h's).
    pub fn check(
        &self,
        cat: &FiniteCategory,
        src: &TruncatedSimplicialObject,
        dst: &TruncatedSimplicialObject,
        from: &SimplicialMap,
        to: &SimplicialMap,
    ) -> Result<(), String> {
        let nn = src.truncation.min(dst.truncation);
        if self.h.len() + 1 < nn + 1 {
            return Err("missing homotopy levels".into());
        }
        for n in 0..nn {
            if self.h[n].len() != n + 1 {
                return Err(format!("level {n} must carry {} homotopy maps", n + 1));
            }
            for (i, hi) in self.h[n].iter().enumerate() {
                if !hi.is_valid(cat, &src.levels[n], &dst.levels[n + 1]) {
                    return Err(format!("h_{i} at level {n} is not a valid map"));
                }
            }
            // boundary conditions
            if dst.faces[n + 1][0].compose(cat, &self.h[n][0]) != from.levels[n] {
                return Err(format!("d_0 h_0 ≠ `from` at level {n}"));
            }
            if dst.faces[n + 1][n + 1].compose(cat, &self.h[n][n]) != to.levels[n] {
                return Err(format!("d_{} h_{n} ≠ `to` at level {n}", n + 1));
            }
            // face relations
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = dst.faces[n + 1][i].compose(cat, &self.h[n][j]);
                    if i < j {
                        let rhs = self.h[n - 1][j - 1].compose(cat, &src.faces[n][i]);
                        if lhs != rhs {
                            return Err(format!("d_{i} h_{j} ≠ h_{} d_{i} at level {n}", j - 1));
                        }
                    } else if i == j && i > 0 {
                        let rhs = dst.faces[n + 1][i].compose(cat, &self.h[n][i - 1]);
                        if lhs != rhs {
                            return Err(format!("d_{i} h_{i} ≠ d_{i} h_{} at level {n}", i - 1));
                        }
                    } else if i > j + 1 {
                        let rhs = self.h[n - 1][j].compose(cat, &src.faces[n][i - 1]);
                        if lhs != rhs {
                            return Err(format!("d_{i} h_{j} ≠ h_{j} d_{} at level {n}", i - 1));
                        }
                    }
                }
            }
            // degeneracy relations s_i h_j = h_{j+1} s_i (i ≤ j) and
            // s_i h_j = h_j s_{i−1} (i > j), available when level n+1
            // of the source still carries homotopy maps
            if n + 1 < nn {
                for j in 0..=n {
                    for i in 0..=n + 1 {
                        let lhs = dst.degens[n + 1][i].compose(cat, &self.h[n][j]);
                        let rhs = if i <= j {
                            self.h[n + 1][j + 1].compose(cat, &src.degens[n][i])
                        } else {
                            self.h[n + 1][j].compose(cat, &src.degens[n][i - 1])
                        };
                        if lhs != rhs {
                            return Err(format!("s/h identity fails at level {n} (i={i}, j={j})"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// For f: X → Y with a section s, builds the map c: Y → Č(f) induced
/// by s and the explicit extra-degeneracy homotopy between c ∘ η(f)
/// and the identity of Č(f). Returns (c, homotopy). The composite
/// η(f) ∘ c is the identity of Y exactly.
pub fn section_homotopy_witness(
    cat: &FiniteCategory,
    f: MorId,
    s: MorId,
    n_max: usize,
) -> Option<(SimplicialMap, SimplicialHomotopy)> {
    if cat.compose(f, s) != cat.identity(cat.dst(f)) {
        return None;
    }
    let family = [f];
    let pbs: Vec<IteratedPullback> = (0..=n_max)
        .map(|n| iterated_pullback(cat, &family, &vec![0; n + 1]))
        .collect::<Option<_>>()?;
    // c at level n: Y → X^{n+1}_Y with every factor s
    let c = SimplicialMap {
        levels: (0..=n_max)
            .map(|n| {
                let m = mediate_into(cat, &pbs[n], &vec![s; n + 1])?;
                Some(CoprodMap {
                    components: vec![(0, m)],
                })
            })
            .collect::<Option<_>>()?,
    };
    // h_i at level n: factors (π_0, …, π_i, sη, …, sη)
    let mut h = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let s_eta = cat.compose(s, pbs[n].to_base);
        let mut row = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let factor_maps: Vec<MorId> = (0..=n + 1)
                .map(|k| if k <= i { pbs[n].projections[k] } else { s_eta })
                .collect();
            let m = mediate_into(cat, &pbs[n + 1], &factor_maps)?;
            row.push(CoprodMap {
                components: vec![(0, m)],
            });
        }
        h.push(row);
    }
    Some((c, SimplicialHomotopy { h }))
}

/// Brute-force search for a simplicial homotopy from `from` to `to`,
/// by backtracking over the component choices of every h_i level by
/// level. Intended for small fixtures only.
pub fn find_simplicial_homotopy(
    cat: &FiniteCategory,
    src: &TruncatedSimplicialObject,
    dst: &TruncatedSimplicialObject,
    from: &SimplicialMap,
    to: &SimplicialMap,
) -> Option<SimplicialHomotopy> {
    let nn = src.truncation.min(dst.truncation);
    if nn == 0 {
        return Some(SimplicialHomotopy { h: vec![] });
    }
    // candidate maps level n → level n+1 of dst
    let candidates = |n: usize| -> Vec<CoprodMap> {
        let per_summand: Vec<Vec<(usize, MorId)>> = src.levels[n]
            .summands
            .iter()
            .map(|&o| {
                dst.levels[n + 1]
                    .summands
                    .iter()
                    .enumerate()
                    .flat_map(|(j, &t)| cat.hom(o, t).into_iter().map(move |m| (j, m)))
                    .collect()
            })
            .collect();
        let lens: Vec<usize> = per_summand.iter().map(|v| v.len()).collect();
        cartesian(&lens)
            .map(|choice| CoprodMap {
                components: choice
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| per_summand[k][c])
                    .collect(),
            })
            .collect()
    };
    fn rec(
        cat: &FiniteCategory,
        src: &TruncatedSimplicialObject,
        dst: &TruncatedSimplicialObject,
        from: &SimplicialMap,
        to: &SimplicialMap,
        cands: &dyn Fn(usize) -> Vec<CoprodMap>,
        nn: usize,
        h: &mut Vec<Vec<CoprodMap>>,
    ) -> bool {
        let n = h.len();
        if n == nn {
            let cand = SimplicialHomotopy { h: h.clone() };
            return cand.check(cat, src, dst, from, to).is_ok();
        }
        let level_cands = cands(n);
        let lens = vec![level_cands.len(); n + 1];
        for choice in cartesian(&lens) {
            let row: Vec<CoprodMap> = choice.iter().map(|&c| level_cands[c].clone()).collect();
            // quick prune: boundary conditions at this level
            if dst.faces[n + 1][0].compose(cat, &row[0]) != from.levels[n] {
                continue;
            }
            if dst.faces[n + 1][n + 1].compose(cat, &row[n]) != to.levels[n] {
                continue;
            }
            h.push(row);
            if rec(cat, src, dst, from, to, cands, nn, h) {
                return true;
            }
            h.pop();
        }
        false
    }
    let mut h = Vec::new();
    if rec(cat, src, dst, from, to, &candidates, nn, &mut h) {
        Some(SimplicialHomotopy { h })
    } else {
        None
    }
}

/// π₀ of a simplicial object, viewed as a simplicial presheaf through
/// the formal sum of representables: the objectwise coequalizer of
/// d_0, d_1: level 1 ⇉ level 0. Returns the presheaf together with,
/// per object, the class of each level-0 element (summand k, morphism
/// m into summand k).
pub fn pi0(
    cat: &FiniteCategory,
    s: &TruncatedSimplicialObject,
) -> (SetPresheaf, Vec<std::collections::BTreeMap<(usize, MorId), usize>>) {
    assert!(s.truncation >= 1, "π₀ needs truncation ≥ 1");
    let elements = |level: &FormalCoproduct, u: ObjId| -> Vec<(usize, MorId)> {
        level
            .summands
            .iter()
            .enumerate()
            .flat_map(|(k, &o)| cat.hom(u, o).into_iter().map(move |m| (k, m)))
            .collect()
    };
    let apply = |map: &CoprodMap, (k, m): (usize, MorId)| -> (usize, MorId) {
        let (j, comp) = map.components[k];
        (j, cat.compose(comp, m))
    };
    let mut sizes = Vec::new();
    let mut classes = Vec::new();
    for u in cat.objects() {
        let elems0 = elements(&s.levels[0], u);
        let index: std::collections::BTreeMap<(usize, MorId), usize> =
            elems0.iter().copied().zip(0..).collect();
        // union-find over level-0 elements
        let mut parent: Vec<usize> = (0..elems0.len()).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in elements(&s.levels[1], u) {
            let a = index[&apply(&s.faces[1][0], e)];
            let b = index[&apply(&s.faces[1][1], e)];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        // number the classes in first-appearance order
        let mut class_no = std::collections::BTreeMap::new();
        let mut class_of = std::collections::BTreeMap::new();
        for (idx, &e) in elems0.iter().enumerate() {
            let r = find(&mut parent, idx);
            let next = class_no.len();
            let c = *class_no.entry(r).or_insert(next);
            class_of.insert(e, c);
        }
        sizes.push(class_no.len());
        classes.push(class_of);
    }
    let mut restrict = Vec::new();
    for g in cat.morphisms() {
        let (u, v) = (cat.src(g), cat.dst(g));
        // for each class at v pick a representative and restrict it
        let mut reps = vec![None; sizes[v.0]];
        for (&(k, m), &c) in &classes[v.0] {
            if reps[c].is_none() {
                reps[c] = Some((k, m));
            }
        }
        restrict.push(
            reps.into_iter()
                .map(|r| {
                    let (k, m) = r.unwrap();
                    classes[u.0][&(k, cat.compose(m, g))]
                })
                .collect(),
        );
    }
    (SetPresheaf { sizes, restrict }, classes)
}

/// The π₀-level content of the generating weak equivalences: the map
/// sheafify(π₀(K_Q)) → ρ(X) induced by p_Q is an isomorphism.
pub fn wp_pi0_check(
    cat: &FiniteCategory,
    top: &Topology,
    q: &DistinguishedSquare,
) -> bool {
    let (kq, p_q) = build_kq(cat, q, 1);
    let (pi, classes) = pi0(cat, &kq);
    let x = q.corner_x(cat);
    let (yx, homs) = yoneda(cat, x);
    // π₀(K_Q) → y(X): class of (k, m) ↦ p_component ∘ m
    let components: Vec<Vec<usize>> = cat
        .objects()
        .map(|u| {
            let mut comp = vec![0usize; pi.size(u)];
            for (&(k, m), &c) in &classes[u.0] {
                let (_, pc) = p_q.levels[0].components[k];
                let target = cat.compose(pc, m);
                comp[c] = homs[u.0].iter().position(|&h| h == target).unwrap();
            }
            comp
        })
        .collect();
    let phi = PresheafMorphism { components };
    if !phi.is_natural(cat, &pi, &yx) {
        return false;
    }
    let spi = sheafify(cat, top, &pi);
    let syx = sheafify(cat, top, &yx);
    let sphi = sheafify_morphism(cat, &phi, &spi, &syx);
    sphi.is_bijective(spi.sheaf(), syx.sheaf())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::topology::cd_topology;

    #[test]
    fn toy_kq_levels_and_identities() {
        let toy = fixtures::toy_site();
        let c = &toy.cat;
        let q = &toy.cd.squares()[0];
        let (kq, p_q) = build_kq(c, q, 3);
        kq.check_identities(c).unwrap();
        // level counts: A ⊔ B^⊔n ⊔ Y
        for n in 0..=3 {
            let b_count = kq.levels[n]
                .summands
                .iter()
                .filter(|&&o| o == toy.o_b)
                .count();
            assert_eq!(b_count, n);
            assert_eq!(kq.levels[n].summands.len(), n + 2);
        }
        let x_const = TruncatedSimplicialObject::constant(c, toy.o_x, 3);
        assert!(p_q.is_simplicial(c, &kq, &x_const));
    }

    #[test]
    fn circle_cech_nerve_identities_and_eta() {
        let space = fixtures::circle_space();
        let site = fixtures::open_site(&space);
        let c = &site.cat;
        // f = inclusion of U1 into the whole space
        let whole = site.object_of(&vec![true; space.points()]).unwrap();
        let mut u1_set = vec![false; space.points()];
        for p in space.up_set(2) {
            u1_set[p] = true;
        }
        let u1 = site.object_of(&u1_set).unwrap();
        let f = c.hom(u1, whole)[0];
        let (nerve, eta) = cech_nerve(c, f, 3).unwrap();
        nerve.check_identities(c).unwrap();
        let y_const = TruncatedSimplicialObject::constant(c, whole, 3);
        assert!(eta.is_simplicial(c, &nerve, &y_const));
        // levels of Č(incl) are all U1: the inclusion is mono
        for n in 0..=3 {
            assert_eq!(nerve.levels[n].summands, vec![u1]);
        }
    }

    #[test]
    fn identity_nerve_section_witness_is_constant() {
        let toy = fixtures::toy_site();
        let c = &toy.cat;
        let f = c.identity(toy.o_a);
        let (cmap, h) = section_homotopy_witness(c, f, f, 3).unwrap();
        let (nerve, eta) = cech_nerve(c, f, 3).unwrap();
        nerve.check_identities(c).unwrap();
        let from = SimplicialMap {
            levels: (0..=3)
                .map(|n| cmap.levels[n].compose(c, &eta.levels[n]))
                .collect(),
        };
        let id_map = SimplicialMap {
            levels: nerve
                .levels
                .iter()
                .map(|l| CoprodMap::identity(l, c))
                .collect(),
        };
        h.check(c, &nerve, &nerve, &from, &id_map).unwrap();
        // η ∘ c = id_Y exactly
        for n in 0..=3 {
            let comp = eta.levels[n].compose(c, &cmap.levels[n]);
            assert_eq!(comp.components, vec![(0, c.identity(toy.o_a))]);
        }
    }

    #[test]
    fn finset_projection_section_witness() {
        // in the FinSet skeleton with cap 4, f: 2 → 1 (unique map) has
        // sections; Č(f) levels are the powers 2^{n+1}
        let sk = fixtures::finset_skeleton(4);
        let c = &sk.cat;
        let two = sk.objs[2];
        let one = sk.objs[1];
        let f = c.hom(two, one)[0];
        for s in c.hom(one, two) {
            let n_max = 1; // 2^3 = 8 > cap 4: higher fiber powers are absent
            let (cmap, h) = section_homotopy_witness(c, f, s, n_max).unwrap();
            let (nerve, eta) = cech_nerve(c, f, n_max).unwrap();
            nerve.check_identities(c).unwrap();
            assert_eq!(nerve.levels[1].summands, vec![sk.objs[4]]);
            let from = SimplicialMap {
                levels: (0..=n_max)
                    .map(|n| cmap.levels[n].compose(c, &eta.levels[n]))
                    .collect(),
            };
            let id_map = SimplicialMap {
                levels: nerve
                    .levels
                    .iter()
                    .map(|l| CoprodMap::identity(l, c))
                    .collect(),
            };
            h.check(c, &nerve, &nerve, &from, &id_map).unwrap();
        }
    }

    #[test]
    fn toy_pi0_is_pushout_and_wp_check() {
        let toy = fixtures::toy_site();
        let c = &toy.cat;
        let q = &toy.cd.squares()[0];
        let (kq, _) = build_kq(c, q, 2);
        let (pi, _) = pi0(c, &kq);
        pi.validate(c).unwrap();
        // π₀(K_Q)(U) = A(U) ⊔_{B(U)} Y(U); at U = B: A(B) = {b_a},
        // Y(B) = {b_y}, glued along id_B: a single class… together with
        // nothing else. |A(B)| = 1, |Y(B)| = 1, |B(B)| = 1 → 1 class.
        assert_eq!(pi.size(toy.o_b), 1);
        // at U = O (initial): all hom-sets are singletons → 1 class
        assert_eq!(pi.size(toy.o_empty), 1);
        // at U = X: A(X) = Hom(X,A) = ∅, Y(X) = ∅ → empty
        assert_eq!(pi.size(toy.o_x), 0);
        let top = cd_topology(c, &toy.cd).unwrap();
        assert!(wp_pi0_check(c, &top, q));
    }

    #[test]
    fn degenerate_square_pq_has_homotopy_inverse() {
        // square with e and b_to_y identities: (A; A, A; A) on the toy
        // object A — p_Q is a homotopy equivalence found by search
        let toy = fixtures::toy_site();
        let c = &toy.cat;
        let id_a = c.identity(toy.o_a);
        let q = crate::topology::DistinguishedSquare {
            b_to_a: id_a,
            b_to_y: id_a,
            e: id_a,
            p: id_a,
        };
        let n_max = 2;
        let (kq, p_q) = build_kq(c, &q, n_max);
        kq.check_identities(c).unwrap();
        let x_const = TruncatedSimplicialObject::constant(c, toy.o_a, n_max);
        // candidate inverse: X → K_Q hitting the Y summand
        let inv = SimplicialMap {
            levels: (0..=n_max)
                .map(|n| {
                    let _ = n;
                    CoprodMap {
                        components: vec![(0, id_a)],
                    }
                })
                .collect(),
        };
        assert!(inv.is_simplicial(c, &x_const, &kq));
        // p_Q ∘ inv = id on the constant object
        for n in 0..=n_max {
            let comp = p_q.levels[n].compose(c, &inv.levels[n]);
            assert_eq!(comp.components, vec![(0, id_a)]);
        }
        // inv ∘ p_Q homotopic to the identity of K_Q
        let comp = SimplicialMap {
            levels: (0..=n_max)
                .map(|n| inv.levels[n].compose(c, &p_q.levels[n]))
                .collect(),
        };
        let id_kq = SimplicialMap {
            levels: kq.levels.iter().map(|l| CoprodMap::identity(l, c)).collect(),
        };
        let h = find_simplicial_homotopy(c, &kq, &kq, &comp, &id_kq)
            .or_else(|| find_simplicial_homotopy(c, &kq, &kq, &id_kq, &comp));
        assert!(h.is_some(), "no simplicial homotopy found");
    }

    #[test]
    fn random_squares_pass_identity_checker() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let cat = fixtures::random_preorder_category(&mut rng, 5);
            let cd = fixtures::random_cd_structure(&mut rng, &cat, 3);
            for q in cd.squares() {
                let (kq, p_q) = build_kq(&cat, q, 3);
                kq.check_identities(&cat).unwrap();
                let x_const =
                    TruncatedSimplicialObject::constant(&cat, q.corner_x(&cat), 3);
                assert!(p_q.is_simplicial(&cat, &kq, &x_const));
            }
        }
    }
}
