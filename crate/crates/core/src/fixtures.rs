//! Shared test and CLI fixtures: the five-object toy site, skeletal
//! finite-set categories, finite-space open-set sites, and random
//! generators for small categories and presheaves.

use std::collections::BTreeMap;

use rand::Rng;

use crate::density::DensityStructure;
use crate::fincat::{CategoryBuilder, FiniteCategory, MorId, ObjId};
use crate::topology::{CdStructure, DistinguishedSquare};

/// The five-object toy site: ∅ → B → A,Y → X with one distinguished
/// pullback square (B; A, Y; X) and two degenerate squares.
pub struct ToySite {
    pub cat: FiniteCategory,
    pub cd: CdStructure,
    pub o_empty: ObjId,
    pub o_b: ObjId,
    pub o_a: ObjId,
    pub o_y: ObjId,
    pub o_x: ObjId,
    pub b_a: MorId,
    pub b_y: MorId,
    pub e: MorId,
    pub p: MorId,
    pub b_x: MorId,
    pub o_to_x: MorId,
    pub o_to_a: MorId,
    pub o_to_y: MorId,
    pub o_to_b: MorId,
}

pub fn toy_site() -> ToySite {
    let mut b = CategoryBuilder::new();
    let o_empty = b.object("Empty").unwrap();
    let o_b = b.object("B").unwrap();
    let o_a = b.object("A").unwrap();
    let o_y = b.object("Y").unwrap();
    let o_x = b.object("X").unwrap();
    let o_to_b = b.morphism("oB", o_empty, o_b).unwrap();
    let o_to_a = b.morphism("oA", o_empty, o_a).unwrap();
    let o_to_y = b.morphism("oY", o_empty, o_y).unwrap();
    let o_to_x = b.morphism("oX", o_empty, o_x).unwrap();
    let b_a = b.morphism("bA", o_b, o_a).unwrap();
    let b_y = b.morphism("bY", o_b, o_y).unwrap();
    let e = b.morphism("e", o_a, o_x).unwrap();
    let p = b.morphism("p", o_y, o_x).unwrap();
    let b_x = b.morphism("bX", o_b, o_x).unwrap();
    b.auto_identities().unwrap();
    b.composite(b_a, o_to_b, o_to_a);
    b.composite(b_y, o_to_b, o_to_y);
    b.composite(e, o_to_a, o_to_x);
    b.composite(p, o_to_y, o_to_x);
    b.composite(e, b_a, b_x);
    b.composite(p, b_y, b_x);
    b.composite(b_x, o_to_b, o_to_x);
    let cat = b.build().unwrap();

    let id_empty = cat.identity(o_empty);
    let id_a = cat.identity(o_a);
    let main = DistinguishedSquare {
        b_to_a: b_a,
        b_to_y: b_y,
        e,
        p,
    };
    // Degenerate square with corners (∅, ∅; A, A).
    let degen_a = DistinguishedSquare {
        b_to_a: o_to_a,
        b_to_y: id_empty,
        e: id_a,
        p: o_to_a,
    };
    // The all-∅ square.
    let degen_o = DistinguishedSquare {
        b_to_a: id_empty,
        b_to_y: id_empty,
        e: id_empty,
        p: id_empty,
    };
    let cd = CdStructure::new(vec![main, degen_a, degen_o]);

    ToySite {
        cat,
        cd,
        o_empty,
        o_b,
        o_a,
        o_y,
        o_x,
        b_a,
        b_y,
        e,
        p,
        b_x,
        o_to_x,
        o_to_a,
        o_to_y,
        o_to_b,
    }
}

/// The density structure on the toy site, stabilization index 2.
pub fn toy_density(toy: &ToySite) -> DensityStructure {
    let c = &toy.cat;
    let mut levels: BTreeMap<(ObjId, usize), Vec<MorId>> = BTreeMap::new();
    let id = |o: ObjId| c.identity(o);
    for i in 0..=2usize {
        levels.insert((toy.o_empty, i), vec![id(toy.o_empty)]);
    }
    for &(o, into) in &[
        (toy.o_b, toy.o_to_b),
        (toy.o_a, toy.o_to_a),
        (toy.o_y, toy.o_to_y),
    ] {
        levels.insert((o, 0), vec![id(o), into]);
        levels.insert((o, 1), vec![id(o)]);
        levels.insert((o, 2), vec![id(o)]);
    }
    levels.insert((toy.o_x, 0), vec![id(toy.o_x), toy.e, toy.o_to_x]);
    levels.insert((toy.o_x, 1), vec![id(toy.o_x), toy.e]);
    levels.insert((toy.o_x, 2), vec![id(toy.o_x)]);
    DensityStructure::new(2, levels)
}

/// Skeletal category of finite sets {0, 1, …, cap} with all functions.
/// Object `n` is the set {0, …, n−1}; morphism names encode the graph.
pub struct FinSetSkeleton {
    pub cat: FiniteCategory,
    pub objs: Vec<ObjId>,
    /// map_id[(m, n)][encoded function] where a function f: m → n is
    /// encoded as Σ f(i)·n^i.
    pub maps: BTreeMap<(usize, usize), Vec<MorId>>,
}

impl FinSetSkeleton {
    /// The morphism for the concrete function f: m → n.
    pub fn func(&self, m: usize, n: usize, f: &[usize]) -> MorId {
        assert_eq!(f.len(), m);
        let mut code = 0usize;
        for i in (0..m).rev() {
            assert!(f[i] < n);
            code = code * n + f[i];
        }
        self.maps[&(m, n)][code]
    }
}

fn decode_func(m: usize, n: usize, mut code: usize) -> Vec<usize> {
    let mut f = Vec::with_capacity(m);
    for _ in 0..m {
        f.push(code % n);
        code /= n;
    }
    f
}

pub fn finset_skeleton(cap: usize) -> FinSetSkeleton {
    let mut b = CategoryBuilder::new();
    let objs: Vec<ObjId> = (0..=cap).map(|n| b.object(&format!("N{}", n)).unwrap()).collect();
    let mut maps: BTreeMap<(usize, usize), Vec<MorId>> = BTreeMap::new();
    for m in 0..=cap {
        for n in 0..=cap {
            let count = if m == 0 {
                1
            } else if n == 0 {
                0
            } else {
                n.pow(m as u32)
            };
            let mut v = Vec::with_capacity(count);
            for code in 0..count {
                if m == 1 && n == 1 {
                    // will be the identity; create anyway and mark below
                }
                let f = decode_func(m, n, code);
                let name = if m == 0 {
                    format!("z{}", n)
                } else {
                    format!(
                        "f{}_{}_{}",
                        m,
                        n,
                        f.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("")
                    )
                };
                let mor = b.morphism(&name, objs[m], objs[n]).unwrap();
                v.push(mor);
            }
            maps.insert((m, n), v);
        }
    }
    // identities
    for n in 0..=cap {
        if n == 0 {
            b.identity(objs[0], maps[&(0, 0)][0]);
        } else {
            let idf: Vec<usize> = (0..n).collect();
            let mut code = 0usize;
            for i in (0..n).rev() {
                code = code * n + idf[i];
            }
            b.identity(objs[n], maps[&(n, n)][code]);
        }
    }
    // composition
    for m in 0..=cap {
        for n in 0..=cap {
            for k in 0..=cap {
                for (ci, &fm) in maps[&(m, n)].iter().enumerate() {
                    let f = decode_func(m, n, ci);
                    for (cj, &gm) in maps[&(n, k)].iter().enumerate() {
                        let g = decode_func(n, k, cj);
                        let h: Vec<usize> = f.iter().map(|&x| g[x]).collect();
                        let mut code = 0usize;
                        for i in (0..m).rev() {
                            code = code * k + h[i];
                        }
                        let hm = maps[&(m, k)][code];
                        b.composite(gm, fm, hm);
                    }
                }
            }
        }
    }
    let cat = b.build().unwrap();
    FinSetSkeleton { cat, objs, maps }
}

/// A finite T0 space given by its specialization poset: `leq[x][y]` iff
/// x ≤ y. Open sets are the up-sets; the minimal open set of x is
/// U_x = { y : x ≤ y }.
#[derive(Debug, Clone)]
pub struct FiniteSpace {
    pub point_names: Vec<String>,
    pub leq: Vec<Vec<bool>>,
}

impl FiniteSpace {
    pub fn points(&self) -> usize {
        self.point_names.len()
    }

    pub fn up_set(&self, x: usize) -> Vec<usize> {
        (0..self.points()).filter(|&y| self.leq[x][y]).collect()
    }

    pub fn is_open(&self, set: &[bool]) -> bool {
        (0..self.points()).all(|x| {
            !set[x] || (0..self.points()).all(|y| !self.leq[x][y] || set[y])
        })
    }

    pub fn open_sets(&self) -> Vec<Vec<bool>> {
        let n = self.points();
        let mut out = Vec::new();
        for mask in 0..(1usize << n) {
            let set: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
            if self.is_open(&set) {
                out.push(set);
            }
        }
        out
    }
}

/// The "pseudo-circle": four points, two open and two closed, whose
/// order complex is a 4-cycle.
pub fn circle_space() -> FiniteSpace {
    // points: x1, x2 open (maximal); y1, y2 closed (minimal, below both).
    let names = vec!["x1", "x2", "y1", "y2"];
    let n = 4;
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        leq[i][i] = true;
    }
    leq[2][0] = true; // y1 ≤ x1
    leq[2][1] = true;
    leq[3][0] = true;
    leq[3][1] = true;
    FiniteSpace {
        point_names: names.into_iter().map(String::from).collect(),
        leq,
    }
}

/// Minimal finite model of the 2-sphere: six points in three levels.
pub fn sphere2_space() -> FiniteSpace {
    // z1,z2 ≤ y1,y2 ≤ x1,x2 with all cross relations between
    // consecutive (and hence all) levels; opens are up-sets.
    let names = vec!["x1", "x2", "y1", "y2", "z1", "z2"];
    let n = 6;
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        leq[i][i] = true;
    }
    for &y in &[2usize, 3] {
        for &x in &[0usize, 1] {
            leq[y][x] = true;
        }
    }
    for &z in &[4usize, 5] {
        for &y in &[2usize, 3] {
            leq[z][y] = true;
        }
        for &x in &[0usize, 1] {
            leq[z][x] = true;
        }
    }
    FiniteSpace {
        point_names: names.into_iter().map(String::from).collect(),
        leq,
    }
}

/// The open-set site of a finite space: objects are the open sets,
/// morphisms the inclusions, distinguished squares all
/// (U∩V; U, V; U∪V) with the union covering.
pub struct OpenSite {
    pub cat: FiniteCategory,
    pub cd: CdStructure,
    pub space: FiniteSpace,
    /// opens[i] is the point set of object ObjId(i).
    pub opens: Vec<Vec<bool>>,
}

impl OpenSite {
    pub fn object_of(&self, set: &[bool]) -> Option<ObjId> {
        self.opens.iter().position(|o| o == set).map(ObjId)
    }

    pub fn open_name(set: &[bool], space: &FiniteSpace) -> String {
        let pts: Vec<&str> = (0..space.points())
            .filter(|&i| set[i])
            .map(|i| space.point_names[i].as_str())
            .collect();
        if pts.is_empty() {
            "O".to_string()
        } else {
            format!("U_{}", pts.join("_"))
        }
    }
}

pub fn open_site(space: &FiniteSpace) -> OpenSite {
    let opens = space.open_sets();
    let mut b = CategoryBuilder::new();
    let mut ids = Vec::new();
    for set in &opens {
        ids.push(b.object(&OpenSite::open_name(set, space)).unwrap());
    }
    let subset = |a: &[bool], c: &[bool]| a.iter().zip(c).all(|(&x, &y)| !x || y);
    let mut incl: BTreeMap<(usize, usize), MorId> = BTreeMap::new();
    for (i, si) in opens.iter().enumerate() {
        for (j, sj) in opens.iter().enumerate() {
            if i != j && subset(si, sj) {
                let m = b.morphism(&format!("inc_{}_{}", i, j), ids[i], ids[j]).unwrap();
                incl.insert((i, j), m);
            }
        }
    }
    b.auto_identities().unwrap();
    for (&(i, j), &f) in incl.clone().iter() {
        for (&(j2, k), &g) in incl.clone().iter() {
            if j == j2 {
                if i == k {
                    // would be an identity; cannot happen in a poset of sets
                    unreachable!();
                }
                let h = incl[&(i, k)];
                b.composite(g, f, h);
            }
        }
    }
    let cat = b.build().unwrap();
    // distinguished squares
    let mut squares = Vec::new();
    let inter = |a: &[bool], c: &[bool]| -> Vec<bool> { a.iter().zip(c).map(|(&x, &y)| x && y).collect() };
    let union = |a: &[bool], c: &[bool]| -> Vec<bool> { a.iter().zip(c).map(|(&x, &y)| x || y).collect() };
    let find = |s: &[bool]| opens.iter().position(|o| o[..] == *s).unwrap();
    let arrow = |i: usize, j: usize, cat: &FiniteCategory| -> MorId {
        if i == j {
            cat.identity(ids[i])
        } else {
            incl[&(i, j)]
        }
    };
    for (ai, sa) in opens.iter().enumerate() {
        for (yi, sy) in opens.iter().enumerate() {
            let bi = find(&inter(sa, sy));
            let xi = find(&union(sa, sy));
            squares.push(DistinguishedSquare {
                b_to_a: arrow(bi, ai, &cat),
                b_to_y: arrow(bi, yi, &cat),
                e: arrow(ai, xi, &cat),
                p: arrow(yi, xi, &cat),
            });
        }
    }
    let cd = CdStructure::new(squares);
    OpenSite {
        cat,
        cd,
        space: space.clone(),
        opens,
    }
}

/// The codimension density structure on an open-set site:
/// D_i(U) = { V ⊆ U open : dim(U ∖ V) ≤ dim U − i }, where dim of a
/// subset is the longest strict specialization chain inside it and
/// dim ∅ = −∞.
pub fn open_site_density(site: &OpenSite) -> DensityStructure {
    let space = &site.space;
    let n = space.points();
    let dim_of = |set: &[bool]| -> i64 {
        if !set.iter().any(|&b| b) {
            return i64::MIN / 2;
        }
        // longest chain x_0 < x_1 < … inside `set`
        let mut best = 0i64;
        // memoized longest chain upward from each point
        fn chain(space: &FiniteSpace, set: &[bool], x: usize, memo: &mut Vec<Option<i64>>) -> i64 {
            if let Some(v) = memo[x] {
                return v;
            }
            let mut b = 0i64;
            for y in 0..space.points() {
                if y != x && space.leq[x][y] && set[y] {
                    b = b.max(1 + chain(space, set, y, memo));
                }
            }
            memo[x] = Some(b);
            b
        }
        let mut memo = vec![None; n];
        for x in 0..n {
            if set[x] {
                best = best.max(chain(space, set, x, &mut memo));
            }
        }
        best
    };
    let max_dim = dim_of(&vec![true; n]).max(0);
    let stab = (max_dim as usize) + 1;
    let subset = |a: &[bool], c: &[bool]| a.iter().zip(c).all(|(&x, &y)| !x || y);
    let mut levels: BTreeMap<(ObjId, usize), Vec<MorId>> = BTreeMap::new();
    for (ui, su) in site.opens.iter().enumerate() {
        let du = dim_of(su);
        for i in 0..=stab {
            let mut v = Vec::new();
            for (vi, sv) in site.opens.iter().enumerate() {
                if !subset(sv, su) {
                    continue;
                }
                let diff: Vec<bool> = su.iter().zip(sv).map(|(&a, &b)| a && !b).collect();
                // an empty difference means V = U: isomorphisms belong
                // to every level (this also covers the empty open,
                // whose dimension sentinel would otherwise reject its
                // own identity)
                if !diff.iter().any(|&b| b) || dim_of(&diff) <= du - i as i64 {
                    let m = if ui == vi {
                        site.cat.identity(ObjId(ui))
                    } else {
                        // the inclusion morphism
                        site.cat
                            .hom(ObjId(vi), ObjId(ui))
                            .into_iter()
                            .next()
                            .unwrap()
                    };
                    v.push(m);
                }
            }
            levels.insert((ObjId(ui), i), v);
        }
    }
    DensityStructure::new(stab, levels)
}

/// Random preorder category on up to `max_objects` objects: hom-sets
/// have at most one element, so composition is forced and associativity
/// is automatic.
pub fn random_preorder_category<R: Rng>(rng: &mut R, max_objects: usize) -> FiniteCategory {
    let n = rng.gen_range(2..=max_objects);
    let mut rel = vec![vec![false; n]; n];
    for i in 0..n {
        rel[i][i] = true;
    }
    let density = rng.gen_range(1..=4) as f64 / 8.0;
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(density) {
                rel[i][j] = true;
            }
        }
    }
    // transitive closure
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if rel[i][k] && rel[k][j] {
                    rel[i][j] = true;
                }
            }
        }
    }
    let mut b = CategoryBuilder::new();
    let objs: Vec<ObjId> = (0..n).map(|i| b.object(&format!("P{}", i)).unwrap()).collect();
    let mut mor: BTreeMap<(usize, usize), MorId> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if rel[i][j] {
                if i == j {
                    let m = b.morphism(&format!("id_P{}", i), objs[i], objs[j]).unwrap();
                    b.identity(objs[i], m);
                    mor.insert((i, j), m);
                } else {
                    let m = b.morphism(&format!("r{}_{}", i, j), objs[i], objs[j]).unwrap();
                    mor.insert((i, j), m);
                }
            }
        }
    }
    for (&(i, j), &f) in mor.clone().iter() {
        for (&(j2, k), &g) in mor.clone().iter() {
            if j == j2 {
                b.composite(g, f, mor[&(i, k)]);
            }
        }
    }
    b.build().unwrap()
}

/// Random cd-structure on a category: picks commutative squares at random.
pub fn random_cd_structure<R: Rng>(rng: &mut R, cat: &FiniteCategory, max_squares: usize) -> CdStructure {
    let mut squares = Vec::new();
    let mors: Vec<MorId> = cat.morphisms().collect();
    let attempts = max_squares * 20;
    for _ in 0..attempts {
        if squares.len() >= max_squares {
            break;
        }
        let e = mors[rng.gen_range(0..mors.len())];
        let p_cands: Vec<MorId> = cat
            .morphisms()
            .filter(|&m| cat.dst(m) == cat.dst(e))
            .collect();
        let p = p_cands[rng.gen_range(0..p_cands.len())];
        // pick a common source b with maps commuting
        let mut found = None;
        'b: for bo in cat.objects() {
            for ba in cat.hom(bo, cat.src(e)) {
                for &by in &cat.hom(bo, cat.src(p)) {
                    if cat.compose(e, ba) == cat.compose(p, by) && rng.gen_bool(0.7) {
                        found = Some(DistinguishedSquare {
                            b_to_a: ba,
                            b_to_y: by,
                            e,
                            p,
                        });
                        break 'b;
                    }
                }
            }
        }
        if let Some(sq) = found {
            squares.push(sq);
        }
    }
    CdStructure::new(squares)
}

/// The one-object category with only the identity morphism.
pub fn one_object_category() -> FiniteCategory {
    let mut b = CategoryBuilder::new();
    b.object("pt").unwrap();
    b.auto_identities().unwrap();
    b.build().unwrap()
}

/// The free finite-coproduct completion of a base category, truncated
/// at `cap` atoms per object: objects are multisets of base objects of
/// size ≤ cap (the empty multiset is the initial object `0`), and a
/// morphism assigns each source atom a target atom together with a base
/// morphism between them.
pub fn sum_completion(base: &FiniteCategory, cap: usize) -> FiniteCategory {
    // multisets as sorted atom lists
    let mut multisets: Vec<Vec<ObjId>> = vec![vec![]];
    for _ in 0..cap {
        let mut next: Vec<Vec<ObjId>> = Vec::new();
        for m in &multisets {
            if m.len() < cap {
                let min = m.last().map(|o| o.0).unwrap_or(0);
                for o in base.objects().filter(|o| o.0 >= min) {
                    let mut ext = m.clone();
                    ext.push(o);
                    next.push(ext);
                }
            }
        }
        for n in next {
            if !multisets.contains(&n) {
                multisets.push(n);
            }
        }
    }
    multisets.sort();
    let ms_name = |m: &[ObjId]| -> String {
        if m.is_empty() {
            "0".to_string()
        } else {
            m.iter()
                .map(|&o| base.object_name(o))
                .collect::<Vec<_>>()
                .join("+")
        }
    };
    let mut b = CategoryBuilder::new();
    let objs: Vec<ObjId> = multisets
        .iter()
        .map(|m| b.object(&ms_name(m)).unwrap())
        .collect();
    // a morphism is per-atom data (target atom index, base morphism);
    // enumerate all of them for every ordered pair of multisets
    type Comp = Vec<(usize, MorId)>;
    let mut mor_of: BTreeMap<(usize, usize, Comp), MorId> = BTreeMap::new();
    let mut all: Vec<(usize, usize, Comp)> = Vec::new();
    for (si, sm) in multisets.iter().enumerate() {
        for (ti, tm) in multisets.iter().enumerate() {
            let choices: Vec<Vec<(usize, MorId)>> = sm
                .iter()
                .map(|&a| {
                    tm.iter()
                        .enumerate()
                        .flat_map(|(j, &t)| base.hom(a, t).into_iter().map(move |f| (j, f)))
                        .collect()
                })
                .collect();
            let lens: Vec<usize> = choices.iter().map(|c| c.len()).collect();
            if lens.iter().any(|&l| l == 0) {
                continue;
            }
            for pick in crate::util::cartesian(&lens) {
                let comp: Comp = pick
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| choices[k][c])
                    .collect();
                let name = format!(
                    "m{}_{}_{}",
                    si,
                    ti,
                    comp.iter()
                        .map(|(j, f)| format!("{}x{}", j, f.0))
                        .collect::<Vec<_>>()
                        .join("_")
                );
                let id = b.morphism(&name, objs[si], objs[ti]).unwrap();
                mor_of.insert((si, ti, comp.clone()), id);
                all.push((si, ti, comp));
            }
        }
    }
    for (si, ti, comp) in &all {
        // identity
        if si == ti
            && comp
                .iter()
                .enumerate()
                .all(|(k, &(j, f))| j == k && f == base.identity(multisets[*si][k]))
        {
            b.identity(objs[*si], mor_of[&(*si, *ti, comp.clone())]);
        }
    }
    for (si, ti, f) in &all {
        for (ti2, ui, g) in &all {
            if ti2 != ti {
                continue;
            }
            let comp: Comp = f
                .iter()
                .map(|&(j, fm)| {
                    let (k, gm) = g[j];
                    (k, base.compose(gm, fm))
                })
                .collect();
            b.composite(
                mor_of[&(*ti2, *ui, g.clone())],
                mor_of[&(*si, *ti, f.clone())],
                mor_of[&(*si, *ui, comp)],
            );
        }
    }
    b.build().unwrap()
}

/// The poset of subsets of a two-element set, with inclusions.
pub fn two_subsets_poset() -> FiniteCategory {
    let mut b = CategoryBuilder::new();
    let e = b.object("e").unwrap();
    let s1 = b.object("s1").unwrap();
    let s2 = b.object("s2").unwrap();
    let s12 = b.object("s12").unwrap();
    b.auto_identities().unwrap();
    let pairs = [(e, s1), (e, s2), (e, s12), (s1, s12), (s2, s12)];
    let mut mors = BTreeMap::new();
    for (x, y) in pairs {
        let m = b
            .morphism(&format!("i{}{}", x.0, y.0), x, y)
            .unwrap();
        mors.insert((x, y), m);
    }
    for (x, y) in pairs {
        for (y2, z) in pairs {
            if y2 == y {
                b.composite(mors[&(y, z)], mors[&(x, y)], mors[&(x, z)]);
            }
        }
    }
    b.build().unwrap()
}

impl FinSetSkeleton {
    /// The designated binary sums inside the truncation cap:
    /// m ⊔ n = m+n for m+n ≤ cap, with the two canonical injections.
    pub fn designated_sums(
        &self,
    ) -> BTreeMap<(ObjId, ObjId), (ObjId, MorId, MorId)> {
        let cap = self.objs.len() - 1;
        let mut sums = BTreeMap::new();
        for m in 0..=cap {
            for n in 0..=cap - m {
                let i1: Vec<usize> = (0..m).collect();
                let i2: Vec<usize> = (0..n).map(|i| m + i).collect();
                sums.insert(
                    (self.objs[m], self.objs[n]),
                    (
                        self.objs[m + n],
                        self.func(m, m + n, &i1),
                        self.func(n, m + n, &i2),
                    ),
                );
            }
        }
        sums
    }
}
