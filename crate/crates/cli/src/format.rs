//! The line-oriented `.site` file format: parsing with line diagnostics
//! and a canonical serializer. The formal grammar lives in
//! `docs/site-format.md`.

use cdsite::absheaf::AbPresheaf;
use cdsite::abelian::{FgAbGroup, Mat};
use cdsite::density::DensityStructure;
use cdsite::fincat::{CategoryBuilder, FiniteCategory, MorId, ObjId};
use cdsite::presheaf::SetPresheaf;
use cdsite::topology::{CdStructure, DistinguishedSquare};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// A designated binary coproduct from the `[chunky]` block:
/// `apex = x + y` with coprojections `ix`, `iy`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DesignatedSum {
    pub x: ObjId,
    pub y: ObjId,
    pub apex: ObjId,
    pub ix: MorId,
    pub iy: MorId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedSetPresheaf {
    pub name: String,
    pub presheaf: SetPresheaf,
    /// Element names per object, defining the element indices.
    pub elements: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedAbPresheaf {
    pub name: String,
    pub presheaf: AbPresheaf,
}

/// One fully resolved site file: a finite category, a cd-structure and
/// the optional density / presheaf / chunky payloads.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteDocument {
    pub cat: FiniteCategory,
    pub cd: CdStructure,
    pub square_names: Vec<String>,
    pub density: Option<DensityStructure>,
    pub presheaves: Vec<NamedSetPresheaf>,
    pub absheaves: Vec<NamedAbPresheaf>,
    /// `Some` iff the file has a `[chunky]` block; the designated sums,
    /// sorted by summand pair.
    pub chunky: Option<Vec<DesignatedSum>>,
}

impl SiteDocument {
    pub fn presheaf(&self, name: &str) -> Option<&NamedSetPresheaf> {
        self.presheaves.iter().find(|p| p.name == name)
    }

    pub fn absheaf(&self, name: &str) -> Option<&NamedAbPresheaf> {
        self.absheaves.iter().find(|p| p.name == name)
    }

    pub fn square(&self, name: &str) -> Option<&DistinguishedSquare> {
        let i = self.square_names.iter().position(|n| n == name)?;
        Some(&self.cd.squares()[i])
    }

    pub fn designated_sums(&self) -> Option<BTreeMap<(ObjId, ObjId), (ObjId, MorId, MorId)>> {
        self.chunky.as_ref().map(|sums| {
            sums.iter()
                .map(|s| ((s.x, s.y), (s.apex, s.ix, s.iy)))
                .collect()
        })
    }
}

fn err(line: usize, msg: impl Into<String>) -> String {
    format!("line {}: {}", line, msg.into())
}

/// A single logical line: a key, an optional head (between the key and
/// `:`), and the payload after `:`.
struct Line {
    no: usize,
    key: String,
    head: Vec<String>,
    rest: String,
}

enum Section {
    Category(Vec<Line>),
    Cd(Vec<Line>),
    Density(Vec<Line>),
    Presheaf(String, Vec<Line>),
    AbPresheaf(String, Vec<Line>),
    Chunky(Vec<Line>),
}

fn split_sections(text: &str) -> Result<Vec<Section>, String> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(inner) = line.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| err(no, "unterminated section header"))?
                .trim();
            let mut words = inner.split_whitespace();
            let section = match (words.next(), words.next(), words.next()) {
                (Some("category"), None, _) => Section::Category(Vec::new()),
                (Some("cd"), None, _) => Section::Cd(Vec::new()),
                (Some("density"), None, _) => Section::Density(Vec::new()),
                (Some("chunky"), None, _) => Section::Chunky(Vec::new()),
                (Some("presheaf"), Some(name), None) => {
                    Section::Presheaf(name.to_string(), Vec::new())
                }
                (Some("abpresheaf"), Some(name), None) => {
                    Section::AbPresheaf(name.to_string(), Vec::new())
                }
                _ => return Err(err(no, format!("unknown section header `[{inner}]`"))),
            };
            sections.push(section);
            continue;
        }
        let (front, rest) = line
            .split_once(':')
            .ok_or_else(|| err(no, "expected `key ...: value` or a section header"))?;
        let mut words = front.split_whitespace();
        let key = words
            .next()
            .ok_or_else(|| err(no, "missing keyword before `:`"))?
            .to_string();
        let head: Vec<String> = words.map(str::to_string).collect();
        let parsed = Line {
            no,
            key,
            head,
            rest: rest.trim().to_string(),
        };
        let lines = match sections.last_mut() {
            Some(Section::Category(l))
            | Some(Section::Cd(l))
            | Some(Section::Density(l))
            | Some(Section::Presheaf(_, l))
            | Some(Section::AbPresheaf(_, l))
            | Some(Section::Chunky(l)) => l,
            None => return Err(err(no, "content before the first section header")),
        };
        lines.push(parsed);
    }
    Ok(sections)
}

fn parse_category(lines: &[Line]) -> Result<FiniteCategory, String> {
    let mut b = CategoryBuilder::new();
    let mut have_objects = false;
    // objects and morphisms first: compose lines may reference
    // morphisms declared later
    for l in lines {
        match l.key.as_str() {
            "objects" => {
                if have_objects {
                    return Err(err(l.no, "duplicate `objects` line"));
                }
                have_objects = true;
                for name in l.rest.split_whitespace() {
                    b.object(name).map_err(|e| err(l.no, e.to_string()))?;
                }
            }
            "morphism" => {
                let name = l
                    .head
                    .first()
                    .ok_or_else(|| err(l.no, "expected `morphism NAME: SRC -> DST`"))?;
                let (src, dst) = l
                    .rest
                    .split_once("->")
                    .ok_or_else(|| err(l.no, "expected `SRC -> DST`"))?;
                let src = b
                    .lookup_object(src.trim())
                    .ok_or_else(|| err(l.no, format!("unknown object `{}`", src.trim())))?;
                let dst = b
                    .lookup_object(dst.trim())
                    .ok_or_else(|| err(l.no, format!("unknown object `{}`", dst.trim())))?;
                b.morphism(name, src, dst)
                    .map_err(|e| err(l.no, e.to_string()))?;
            }
            "compose" => {}
            other => return Err(err(l.no, format!("unknown category entry `{other}`"))),
        }
    }
    if !have_objects {
        return Err("missing `objects` line in the category block".to_string());
    }
    b.auto_identities().map_err(|e| e.to_string())?;
    for l in lines {
        if l.key != "compose" {
            continue;
        }
        let h = l
            .head
            .first()
            .ok_or_else(|| err(l.no, "expected `compose H =: G * F`"))?;
        if l.head.get(1).map(String::as_str) != Some("=") || l.head.len() != 2 {
            return Err(err(l.no, "expected `compose H =: G * F`"));
        }
        let (g, f) = l
            .rest
            .split_once('*')
            .ok_or_else(|| err(l.no, "expected `G * F` after `:`"))?;
        let lookup = |name: &str| {
            b.lookup_morphism(name.trim())
                .ok_or_else(|| err(l.no, format!("unknown morphism `{}`", name.trim())))
        };
        let (h, g, f) = (lookup(h)?, lookup(g)?, lookup(f)?);
        b.composite(g, f, h);
    }
    b.build().map_err(|e| e.to_string())
}

fn parse_cd(
    cat: &FiniteCategory,
    lines: &[Line],
) -> Result<(CdStructure, Vec<String>), String> {
    let mut squares = Vec::new();
    let mut names = Vec::new();
    for l in lines {
        if l.key != "square" {
            return Err(err(l.no, format!("unknown cd entry `{}`", l.key)));
        }
        let name = l
            .head
            .first()
            .ok_or_else(|| err(l.no, "expected `square NAME: B_TO_A B_TO_Y E P`"))?;
        if names.contains(name) {
            return Err(err(l.no, format!("duplicate square name `{name}`")));
        }
        let edges: Vec<MorId> = l
            .rest
            .split_whitespace()
            .map(|m| {
                cat.morphism_by_name(m)
                    .ok_or_else(|| err(l.no, format!("unknown morphism `{m}`")))
            })
            .collect::<Result<_, _>>()?;
        let &[b_to_a, b_to_y, e, p] = edges.as_slice() else {
            return Err(err(l.no, "a square needs exactly four edges: B_TO_A B_TO_Y E P"));
        };
        let q = DistinguishedSquare { b_to_a, b_to_y, e, p };
        if !q.is_well_formed(cat) || !q.commutes(cat) {
            return Err(err(l.no, format!("square `{name}` is malformed or does not commute")));
        }
        squares.push(q);
        names.push(name.clone());
    }
    Ok((CdStructure::new(squares), names))
}

fn parse_density(cat: &FiniteCategory, lines: &[Line]) -> Result<DensityStructure, String> {
    let mut stabilization = None;
    let mut levels = BTreeMap::new();
    for l in lines {
        match l.key.as_str() {
            "stabilization" => {
                let v: usize = l
                    .rest
                    .parse()
                    .map_err(|_| err(l.no, "stabilization must be a number"))?;
                if stabilization.replace(v).is_some() {
                    return Err(err(l.no, "duplicate `stabilization` line"));
                }
            }
            "level" => {
                let (obj, idx) = match l.head.as_slice() {
                    [obj, idx] => (obj, idx),
                    _ => return Err(err(l.no, "expected `level OBJ i: m1 m2 ...`")),
                };
                let x = cat
                    .object_by_name(obj)
                    .ok_or_else(|| err(l.no, format!("unknown object `{obj}`")))?;
                let i: usize = idx
                    .parse()
                    .map_err(|_| err(l.no, "level index must be a number"))?;
                let mut ms: Vec<MorId> = l
                    .rest
                    .split_whitespace()
                    .map(|m| {
                        cat.morphism_by_name(m)
                            .ok_or_else(|| err(l.no, format!("unknown morphism `{m}`")))
                    })
                    .collect::<Result<_, _>>()?;
                ms.sort();
                ms.dedup();
                if levels.insert((x, i), ms).is_some() {
                    return Err(err(l.no, format!("duplicate level D_{i}({obj})")));
                }
            }
            other => return Err(err(l.no, format!("unknown density entry `{other}`"))),
        }
    }
    let stabilization =
        stabilization.ok_or("missing `stabilization` line in the density block")?;
    Ok(DensityStructure {
        stabilization,
        levels,
    })
}

fn parse_presheaf(
    cat: &FiniteCategory,
    name: &str,
    lines: &[Line],
) -> Result<NamedSetPresheaf, String> {
    let mut elements: Vec<Option<Vec<String>>> = vec![None; cat.object_count()];
    for l in lines {
        if l.key != "elements" {
            continue;
        }
        let obj = match l.head.as_slice() {
            [obj] => obj,
            _ => return Err(err(l.no, "expected `elements OBJ: e1 e2 ...`")),
        };
        let x = cat
            .object_by_name(obj)
            .ok_or_else(|| err(l.no, format!("unknown object `{obj}`")))?;
        let names: Vec<String> = l.rest.split_whitespace().map(str::to_string).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(err(l.no, format!("duplicate element `{n}`")));
            }
        }
        if elements[x.0].replace(names).is_some() {
            return Err(err(l.no, format!("duplicate `elements {obj}` line")));
        }
    }
    let elements: Vec<Vec<String>> = elements.into_iter().map(Option::unwrap_or_default).collect();
    let sizes: Vec<usize> = elements.iter().map(Vec::len).collect();
    let index_of = |l: &Line, x: ObjId, name: &str| -> Result<usize, String> {
        elements[x.0]
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| {
                err(
                    l.no,
                    format!("unknown element `{name}` at object {}", cat.object_name(x)),
                )
            })
    };
    // identity restrictions are implied; everything else starts
    // undefined and must be supplied by a `map` line
    let mut restrict: Vec<Option<Vec<usize>>> = cat
        .morphisms()
        .map(|m| {
            if cat.is_identity(m) {
                Some((0..sizes[cat.src(m).0]).collect())
            } else if sizes[cat.dst(m).0] == 0 {
                Some(Vec::new())
            } else {
                None
            }
        })
        .collect();
    for l in lines {
        match l.key.as_str() {
            "elements" => {}
            "map" => {
                let mor = match l.head.as_slice() {
                    [m] => m,
                    _ => return Err(err(l.no, "expected `map MOR: v -> u, ...`")),
                };
                let m = cat
                    .morphism_by_name(mor)
                    .ok_or_else(|| err(l.no, format!("unknown morphism `{mor}`")))?;
                let (src, dst) = (cat.src(m), cat.dst(m));
                let mut table = vec![None; sizes[dst.0]];
                for entry in l.rest.split(',') {
                    let entry = entry.trim();
                    if entry.is_empty() {
                        continue;
                    }
                    let (v, u) = entry
                        .split_once("->")
                        .ok_or_else(|| err(l.no, "expected `v -> u` entries"))?;
                    let vi = index_of(l, dst, v.trim())?;
                    let ui = index_of(l, src, u.trim())?;
                    if table[vi].replace(ui).is_some() {
                        return Err(err(l.no, format!("element `{}` mapped twice", v.trim())));
                    }
                }
                let table: Vec<usize> = table
                    .into_iter()
                    .enumerate()
                    .map(|(vi, u)| {
                        u.ok_or_else(|| {
                            err(
                                l.no,
                                format!("element `{}` has no image", elements[dst.0][vi]),
                            )
                        })
                    })
                    .collect::<Result<_, _>>()?;
                if restrict[m.0].replace(table).is_some() && !cat.is_identity(m) {
                    return Err(err(l.no, format!("duplicate `map {mor}` line")));
                }
            }
            other => return Err(err(l.no, format!("unknown presheaf entry `{other}`"))),
        }
    }
    let restrict: Vec<Vec<usize>> = cat
        .morphisms()
        .map(|m| {
            restrict[m.0].take().ok_or_else(|| {
                format!(
                    "presheaf `{name}`: missing `map {}` line",
                    cat.morphism_name(m)
                )
            })
        })
        .collect::<Result<_, _>>()?;
    let presheaf = SetPresheaf { sizes, restrict };
    presheaf
        .validate(cat)
        .map_err(|e| format!("presheaf `{name}`: {e}"))?;
    Ok(NamedSetPresheaf {
        name: name.to_string(),
        presheaf,
        elements,
    })
}

fn parse_abpresheaf(
    cat: &FiniteCategory,
    name: &str,
    lines: &[Line],
) -> Result<NamedAbPresheaf, String> {
    let mut groups: Vec<Option<FgAbGroup>> = vec![None; cat.object_count()];
    for l in lines {
        if l.key != "group" {
            continue;
        }
        let obj = match l.head.as_slice() {
            [obj] => obj,
            _ => return Err(err(l.no, "expected `group OBJ: rank R [torsion t1 t2 ...]`")),
        };
        let x = cat
            .object_by_name(obj)
            .ok_or_else(|| err(l.no, format!("unknown object `{obj}`")))?;
        let words: Vec<&str> = l.rest.split_whitespace().collect();
        if words.first() != Some(&"rank") || words.len() < 2 {
            return Err(err(l.no, "expected `rank R [torsion t1 t2 ...]`"));
        }
        let rank: usize = words[1]
            .parse()
            .map_err(|_| err(l.no, "rank must be a number"))?;
        let torsion: Vec<u64> = match words.get(2) {
            None => Vec::new(),
            Some(&"torsion") => words[3..]
                .iter()
                .map(|w| w.parse().map_err(|_| err(l.no, "bad torsion coefficient")))
                .collect::<Result<_, _>>()?,
            Some(w) => return Err(err(l.no, format!("unexpected `{w}`"))),
        };
        if groups[x.0].replace(FgAbGroup { rank, torsion }).is_some() {
            return Err(err(l.no, format!("duplicate `group {obj}` line")));
        }
    }
    let groups: Vec<FgAbGroup> = cat
        .objects()
        .map(|x| {
            groups[x.0]
                .take()
                .ok_or_else(|| format!("abelian presheaf `{name}`: missing `group {}` line", cat.object_name(x)))
        })
        .collect::<Result<_, _>>()?;
    let gens = |x: ObjId| groups[x.0].rank + groups[x.0].torsion.len();
    // default: identity matrices for identities, zero otherwise
    let mut restrict: Vec<Mat> = cat
        .morphisms()
        .map(|m| {
            if cat.is_identity(m) {
                Mat::identity(gens(cat.src(m)))
            } else {
                Mat::zero(gens(cat.src(m)), gens(cat.dst(m)))
            }
        })
        .collect();
    for l in lines {
        match l.key.as_str() {
            "group" => {}
            "matrix" => {
                let mor = match l.head.as_slice() {
                    [m] => m,
                    _ => return Err(err(l.no, "expected `matrix MOR: a b ; c d`")),
                };
                let m = cat
                    .morphism_by_name(mor)
                    .ok_or_else(|| err(l.no, format!("unknown morphism `{mor}`")))?;
                let (rows, cols) = (gens(cat.src(m)), gens(cat.dst(m)));
                let mut mat = Mat::zero(rows, cols);
                for (i, row) in l.rest.split(';').enumerate() {
                    let entries: Vec<&str> = row.split_whitespace().collect();
                    if i >= rows || entries.len() != cols {
                        return Err(err(
                            l.no,
                            format!("matrix for `{mor}` must be {rows} rows of {cols} entries"),
                        ));
                    }
                    for (j, w) in entries.iter().enumerate() {
                        let v: i64 = w
                            .parse()
                            .map_err(|_| err(l.no, format!("bad matrix entry `{w}`")))?;
                        mat.set(i, j, v);
                    }
                }
                restrict[m.0] = mat;
            }
            other => return Err(err(l.no, format!("unknown abpresheaf entry `{other}`"))),
        }
    }
    let presheaf = AbPresheaf { groups, restrict };
    presheaf
        .validate(cat)
        .map_err(|e| format!("abelian presheaf `{name}`: {e}"))?;
    Ok(NamedAbPresheaf {
        name: name.to_string(),
        presheaf,
    })
}

fn parse_chunky(cat: &FiniteCategory, lines: &[Line]) -> Result<Vec<DesignatedSum>, String> {
    let mut sums = Vec::new();
    for l in lines {
        if l.key != "sum" {
            return Err(err(l.no, format!("unknown chunky entry `{}`", l.key)));
        }
        // sum APEX = X + Y: IX IY
        let (apex, x, y) = match l.head.as_slice() {
            [apex, eq, x, plus, y] if eq == "=" && plus == "+" => (apex, x, y),
            _ => return Err(err(l.no, "expected `sum APEX = X + Y: IX IY`")),
        };
        let obj = |n: &str| {
            cat.object_by_name(n)
                .ok_or_else(|| err(l.no, format!("unknown object `{n}`")))
        };
        let legs: Vec<MorId> = l
            .rest
            .split_whitespace()
            .map(|m| {
                cat.morphism_by_name(m)
                    .ok_or_else(|| err(l.no, format!("unknown morphism `{m}`")))
            })
            .collect::<Result<_, _>>()?;
        let &[ix, iy] = legs.as_slice() else {
            return Err(err(l.no, "expected exactly two coprojections"));
        };
        let sum = DesignatedSum {
            x: obj(x)?,
            y: obj(y)?,
            apex: obj(apex)?,
            ix,
            iy,
        };
        if cat.src(ix) != sum.x || cat.src(iy) != sum.y || cat.dst(ix) != sum.apex
            || cat.dst(iy) != sum.apex
        {
            return Err(err(l.no, "coprojections do not match the declared summands"));
        }
        sums.push(sum);
    }
    sums.sort();
    for w in sums.windows(2) {
        if (w[0].x, w[0].y) == (w[1].x, w[1].y) {
            return Err(format!(
                "duplicate designated sum for ({}, {})",
                cat.object_name(w[0].x),
                cat.object_name(w[0].y)
            ));
        }
    }
    Ok(sums)
}

/// Parses a site file. Errors carry the line number of the first
/// problem.
pub fn parse(text: &str) -> Result<SiteDocument, String> {
    let sections = split_sections(text)?;
    let cat_lines = sections
        .iter()
        .find_map(|s| match s {
            Section::Category(l) => Some(l),
            _ => None,
        })
        .ok_or("missing category block")?;
    if sections
        .iter()
        .filter(|s| matches!(s, Section::Category(_)))
        .count()
        > 1
    {
        return Err("more than one category block".to_string());
    }
    let cat = parse_category(cat_lines)?;

    let mut cd = None;
    let mut density = None;
    let mut presheaves = Vec::new();
    let mut absheaves: Vec<NamedAbPresheaf> = Vec::new();
    let mut chunky = None;
    for s in &sections {
        match s {
            Section::Category(_) => {}
            Section::Cd(lines) => {
                if cd.is_some() {
                    return Err("more than one cd block".to_string());
                }
                cd = Some(parse_cd(&cat, lines)?);
            }
            Section::Density(lines) => {
                if density.is_some() {
                    return Err("more than one density block".to_string());
                }
                let d = parse_density(&cat, lines)?;
                density = Some(d);
            }
            Section::Presheaf(name, lines) => {
                if presheaves.iter().any(|p: &NamedSetPresheaf| &p.name == name) {
                    return Err(format!("duplicate presheaf `{name}`"));
                }
                presheaves.push(parse_presheaf(&cat, name, lines)?);
            }
            Section::AbPresheaf(name, lines) => {
                if absheaves.iter().any(|p| &p.name == name) {
                    return Err(format!("duplicate abpresheaf `{name}`"));
                }
                absheaves.push(parse_abpresheaf(&cat, name, lines)?);
            }
            Section::Chunky(lines) => {
                if chunky.is_some() {
                    return Err("more than one chunky block".to_string());
                }
                chunky = Some(parse_chunky(&cat, lines)?);
            }
        }
    }
    let (cd, square_names) = cd.ok_or("missing cd block")?;
    cd.validate(&cat)?;
    Ok(SiteDocument {
        cat,
        cd,
        square_names,
        density,
        presheaves,
        absheaves,
        chunky,
    })
}

/// Serializes a document to the canonical text form; `parse ∘ serialize`
/// is the identity on parsed documents.
pub fn serialize(doc: &SiteDocument) -> String {
    let cat = &doc.cat;
    // canonical morphism names: identities are always written as
    // `id_<obj>`, matching what the parser's auto-created identities
    // are called
    let mn = |m: MorId| -> String {
        if cat.is_identity(m) {
            format!("id_{}", cat.object_name(cat.src(m)))
        } else {
            cat.morphism_name(m).to_string()
        }
    };
    let mut out = String::new();
    out.push_str("[category]\n");
    let names: Vec<&str> = cat.objects().map(|o| cat.object_name(o)).collect();
    let _ = writeln!(out, "objects: {}", names.join(" "));
    for m in cat.morphisms() {
        if cat.is_identity(m) {
            continue;
        }
        let _ = writeln!(
            out,
            "morphism {}: {} -> {}",
            mn(m),
            cat.object_name(cat.src(m)),
            cat.object_name(cat.dst(m))
        );
    }
    for g in cat.morphisms() {
        for f in cat.morphisms() {
            if cat.is_identity(g) || cat.is_identity(f) || cat.dst(f) != cat.src(g) {
                continue;
            }
            let _ = writeln!(
                out,
                "compose {} =: {} * {}",
                mn(cat.compose(g, f)),
                mn(g),
                mn(f)
            );
        }
    }
    out.push_str("\n[cd]\n");
    for (q, name) in doc.cd.squares().iter().zip(&doc.square_names) {
        let _ = writeln!(
            out,
            "square {}: {} {} {} {}",
            name,
            mn(q.b_to_a),
            mn(q.b_to_y),
            mn(q.e),
            mn(q.p)
        );
    }
    if let Some(d) = &doc.density {
        out.push_str("\n[density]\n");
        let _ = writeln!(out, "stabilization: {}", d.stabilization);
        for ((x, i), ms) in &d.levels {
            // numbering-independent order: the parser renumbers
            // identities to the end, so write them last
            let mut ms: Vec<MorId> = ms.clone();
            ms.sort_by_key(|&m| (cat.is_identity(m), m));
            let ms: Vec<String> = ms.iter().map(|&m| mn(m)).collect();
            let _ = writeln!(out, "level {} {}: {}", cat.object_name(*x), i, ms.join(" "));
        }
    }
    for p in &doc.presheaves {
        let _ = writeln!(out, "\n[presheaf {}]", p.name);
        for x in cat.objects() {
            if !p.elements[x.0].is_empty() {
                let _ = writeln!(
                    out,
                    "elements {}: {}",
                    cat.object_name(x),
                    p.elements[x.0].join(" ")
                );
            }
        }
        for m in cat.morphisms() {
            let dst = cat.dst(m);
            if cat.is_identity(m) || p.presheaf.size(dst) == 0 {
                continue;
            }
            let entries: Vec<String> = (0..p.presheaf.size(dst))
                .map(|v| {
                    format!(
                        "{} -> {}",
                        p.elements[dst.0][v],
                        p.elements[cat.src(m).0][p.presheaf.res(m, v)]
                    )
                })
                .collect();
            let _ = writeln!(out, "map {}: {}", mn(m), entries.join(", "));
        }
    }
    for p in &doc.absheaves {
        let _ = writeln!(out, "\n[abpresheaf {}]", p.name);
        for x in cat.objects() {
            let g = p.presheaf.group(x);
            let mut line = format!("group {}: rank {}", cat.object_name(x), g.rank);
            if !g.torsion.is_empty() {
                let ts: Vec<String> = g.torsion.iter().map(u64::to_string).collect();
                let _ = write!(line, " torsion {}", ts.join(" "));
            }
            let _ = writeln!(out, "{line}");
        }
        for m in cat.morphisms() {
            let mat = p.presheaf.res(m);
            if cat.is_identity(m) || mat.rows == 0 || mat.cols == 0 {
                continue;
            }
            let rows: Vec<String> = (0..mat.rows)
                .map(|i| {
                    (0..mat.cols)
                        .map(|j| mat.get(i, j).to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            let _ = writeln!(out, "matrix {}: {}", mn(m), rows.join(" ; "));
        }
    }
    if let Some(sums) = &doc.chunky {
        out.push_str("\n[chunky]\n");
        for s in sums {
            let _ = writeln!(
                out,
                "sum {} = {} + {}: {} {}",
                cat.object_name(s.apex),
                cat.object_name(s.x),
                cat.object_name(s.y),
                mn(s.ix),
                mn(s.iy)
            );
        }
    }
    out
}
