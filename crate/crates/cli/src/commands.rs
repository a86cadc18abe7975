//! Command implementations: each takes a parsed [`SiteDocument`] and
//! produces a [`Report`].

use crate::format::SiteDocument;
use crate::report::{Report, Status};
use cdsite::abelian::FgAbGroup;
use cdsite::chunky::{
    add_density, is_radditive, p_add, radditivize, radditivize_matches_sheafification,
    why_not_chunky, why_not_chunky_with, ChunkyWitness,
};
use cdsite::cohomology::{cohdim_vanishing_check, mv_check, mv_short_exact_check, sheaf_cohomology};
use cdsite::density::{dimension, is_bounded, validate_density, BoundednessResult};
use cdsite::fincat::{CoprodMap, FiniteCategory, MorId, ObjId};
use cdsite::regular::{is_regular, regular_criterion, RegularCriterionResult, RegularityResult};
use cdsite::sheaf::{cd_sheaf_criterion, is_sheaf, sheafify, CdSheafResult};
use cdsite::simplicial::{
    build_kq, cech_nerve, section_homotopy_witness, wp_pi0_check, SimplicialMap,
};
use cdsite::space::recognize_open_site;
use cdsite::topology::{
    cd_topology, complete_criterion, criterion_applicable, is_complete, simple_coverings,
    CompletenessResult,
    CriterionResult, Sieve, Topology,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Complete,
    Regular,
    Bounded,
}

#[derive(Debug, Clone)]
pub enum Command {
    Validate,
    Topology,
    SimpleCoverings,
    Check(CheckKind),
    SheafCheck(String),
    Sheafify(String),
    Mv(String, String),
    Cohomology(String, String, usize),
    Cohdim,
    Kq(String),
    CechNerve(String),
    Chunky,
    Radditivize(String),
    Suite,
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    /// Simplicial truncation level for `kq` / `cech-nerve`.
    pub truncation: usize,
    /// Maximum cohomological degree reported.
    pub max_degree: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            truncation: 3,
            max_degree: 3,
        }
    }
}

pub fn run(doc: &SiteDocument, cmd: &Command, opts: &Options) -> Report {
    match cmd {
        Command::Validate => validate(doc),
        Command::Topology => topology_report(doc),
        Command::SimpleCoverings => simple_coverings_report(doc),
        Command::Check(kind) => check(doc, *kind),
        Command::SheafCheck(f) => sheaf_check(doc, f),
        Command::Sheafify(f) => sheafify_report(doc, f),
        Command::Mv(square, sheaf) => mv(doc, square, sheaf, opts),
        Command::Cohomology(object, sheaf, degree) => cohomology(doc, object, sheaf, *degree),
        Command::Cohdim => cohdim(doc),
        Command::Kq(square) => kq(doc, square, opts),
        Command::CechNerve(morphism) => cech_nerve_report(doc, morphism, opts),
        Command::Chunky => chunky(doc),
        Command::Radditivize(f) => radditivize_report(doc, f),
        Command::Suite => suite(doc, opts),
    }
}

fn mor_names(cat: &FiniteCategory, ms: impl IntoIterator<Item = MorId>) -> String {
    let names: Vec<&str> = ms.into_iter().map(|m| cat.morphism_name(m)).collect();
    format!("{{{}}}", names.join(", "))
}

fn sieve_str(cat: &FiniteCategory, s: &Sieve) -> String {
    mor_names(cat, s.members.iter().copied())
}

fn groups_str(hs: &[FgAbGroup]) -> String {
    hs.iter()
        .enumerate()
        .map(|(n, h)| format!("H^{n} = {h}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// The cd-topology, or a failed report explaining why it does not exist.
fn topology_of(doc: &SiteDocument, report: &mut Report) -> Option<Topology> {
    match cd_topology(&doc.cat, &doc.cd) {
        Ok(t) => Some(t),
        Err(e) => {
            report.check("topology generation", "§2 topology t_P", false, e.to_string());
            None
        }
    }
}

fn unknown(report: &mut Report, what: &str, name: &str) -> Report {
    let mut r = std::mem::replace(report, Report::new(""));
    r.check(
        "resolve arguments",
        "site file identifiers",
        false,
        format!("unknown {what} `{name}`"),
    );
    r.finish()
}

// ---------------------------------------------------------------- validate

fn validate(doc: &SiteDocument) -> Report {
    let mut r = Report::new("validate");
    let cat = &doc.cat;
    r.check(
        "category axioms",
        "Def 2.1 context (finite category data)",
        cat.validate().is_ok(),
        format!(
            "{} objects, {} morphisms; composition is total, associative and unital",
            cat.object_count(),
            cat.morphism_count()
        ),
    );
    r.check(
        "cd squares well-formed",
        "Def 2.1 cd-structure",
        doc.cd.validate(cat).is_ok(),
        format!("{} distinguished squares, all commuting", doc.cd.squares().len()),
    );
    if let Some(d) = &doc.density {
        let v = validate_density(cat, d);
        r.check(
            "density structure",
            "Def 2.20 conditions (1)-(5)",
            v.is_ok(),
            match v {
                Ok(()) => format!("valid; stabilizes at index {}", d.stabilization),
                Err(e) => e.to_string(),
            },
        );
    }
    for p in &doc.presheaves {
        let v = p.presheaf.validate(cat);
        r.check(
            format!("presheaf {}", p.name),
            "§2 presheaf F",
            v.is_ok(),
            v.err().unwrap_or_else(|| "functorial".to_string()),
        );
    }
    for p in &doc.absheaves {
        let v = p.presheaf.validate(cat);
        r.check(
            format!("abelian presheaf {}", p.name),
            "Lemma 2.18 context (abelian presheaves)",
            v.is_ok(),
            v.err().unwrap_or_else(|| "functorial".to_string()),
        );
    }
    if let Some(sums) = &doc.chunky {
        for s in sums {
            r.check(
                format!(
                    "designated sum {} = {} + {}",
                    cat.object_name(s.apex),
                    cat.object_name(s.x),
                    cat.object_name(s.y)
                ),
                "Def 6.1(2) designated sums",
                cat.is_coproduct_cocone(&[s.x, s.y], s.apex, &[s.ix, s.iy]),
                "must be a genuine coproduct cocone",
            );
        }
    }
    r.finish()
}

// ---------------------------------------------------------------- topology

fn topology_report(doc: &SiteDocument) -> Report {
    let mut r = Report::new("topology");
    let cat = &doc.cat;
    let Some(top) = topology_of(doc, &mut r) else {
        return r.finish();
    };
    r.check(
        "topology axioms",
        "§2 topology t_P",
        top.check_axioms(cat).is_ok(),
        "maximality, stability and transitivity hold",
    );
    let mut total = 0usize;
    for x in cat.objects() {
        let detail = match top.covering_sieves(cat, x, 4096) {
            Some(sieves) => {
                total += sieves.len();
                let list: Vec<String> = sieves.iter().map(|s| sieve_str(cat, s)).collect();
                format!("{} covering sieves: {}", list.len(), list.join(" "))
            }
            None => format!(
                "more than 4096 covering sieves; minimum is {}",
                sieve_str(cat, top.min_covering_sieve(x))
            ),
        };
        r.push(
            format!("covering sieves of {}", cat.object_name(x)),
            "§2 topology t_P",
            Status::Info,
            detail,
        );
    }
    r.push(
        "total covering sieves",
        "§2 topology t_P",
        Status::Info,
        format!("{total} sieves"),
    );
    r.finish()
}

fn simple_coverings_report(doc: &SiteDocument) -> Report {
    let mut r = Report::new("simple-coverings");
    let cat = &doc.cat;
    let sc = simple_coverings(cat, &doc.cd);
    for x in cat.objects() {
        let fams = sc.families_of(x);
        let list: Vec<String> = fams
            .iter()
            .map(|f| mor_names(cat, f.iter().copied()))
            .collect();
        r.push(
            format!("simple coverings of {}", cat.object_name(x)),
            "Def 2.2 simple coverings",
            Status::Info,
            format!("{} families: {}", list.len(), list.join(" ")),
        );
    }
    r.finish()
}

// ------------------------------------------------------------------- check

fn check(doc: &SiteDocument, kind: CheckKind) -> Report {
    match kind {
        CheckKind::Complete => check_complete(doc),
        CheckKind::Regular => check_regular(doc),
        CheckKind::Bounded => check_bounded(doc),
    }
}

fn check_complete(doc: &SiteDocument) -> Report {
    let mut r = Report::new("check complete");
    let cat = &doc.cat;
    let def = is_complete(cat, &doc.cd);
    let def_ok = matches!(&def, Ok(c) if c.is_complete());
    let detail = match &def {
        Ok(CompletenessResult::Complete) => {
            "complete: true — the minimum covering sieve of every non-initial object contains a simple sieve".to_string()
        }
        Ok(CompletenessResult::Incomplete { object, sieve }) => format!(
            "complete: false — covering sieve {} of {} contains no simple sieve",
            sieve_str(cat, sieve),
            cat.object_name(*object)
        ),
        Err(e) => format!("complete: false — {e}"),
    };
    r.check("completeness", "Def 2.3 completeness", def_ok, detail);
    let crit = complete_criterion(cat, &doc.cd);
    let detail = match &crit {
        CriterionResult::Holds => "both criterion conditions hold".to_string(),
        CriterionResult::BadMorphismIntoInitial { morphism } => format!(
            "`{}` maps into an initial object but is not an isomorphism",
            cat.morphism_name(*morphism)
        ),
        CriterionResult::BadPullback {
            square_index,
            morphism,
        } => format!(
            "pulling back the (e, p)-sieve of square #{square_index} along `{}` yields no simple sieve",
            cat.morphism_name(*morphism)
        ),
    };
    r.check("completeness criterion", "Lemma 2.4 criterion", crit.holds(), detail);
    if criterion_applicable(cat, &doc.cd) {
        r.check(
            "criterion agreement",
            "Lemma 2.4 (equivalence with Def 2.3)",
            def_ok == crit.holds(),
            "the definitional check and the criterion must agree",
        );
    } else {
        r.push(
            "criterion agreement",
            "Lemma 2.4 (equivalence with Def 2.3)",
            Status::Info,
            "not compared: a non-initial object is simply covered by initial objects, which is outside the criterion's domain of validity",
        );
    }
    r.finish()
}

fn check_regular(doc: &SiteDocument) -> Report {
    let mut r = Report::new("check regular");
    let cat = &doc.cat;
    let Some(top) = topology_of(doc, &mut r) else {
        return r.finish();
    };
    let reg = is_regular(cat, &doc.cd, &top);
    let detail = match &reg {
        RegularityResult::Regular => {
            "regular: true — every stored square is a pullback with monic e and locally surjective comparison".to_string()
        }
        RegularityResult::NotPullback { square_index } => {
            format!("regular: false — square #{square_index} is not a pullback")
        }
        RegularityResult::ENotMono { square_index } => {
            format!("regular: false — e of square #{square_index} is not a monomorphism")
        }
        RegularityResult::NotLocallySurjective { square_index } => format!(
            "regular: false — the comparison onto ρ(Y)×_ρ(X)ρ(Y) fails for square #{square_index}"
        ),
    };
    r.check("regularity", "Def 2.10 regularity", reg.is_regular(), detail);
    let crit = regular_criterion(cat, &doc.cd);
    let detail = match &crit {
        RegularCriterionResult::Holds => "the derived squares d(Q) are all distinguished".to_string(),
        RegularCriterionResult::NotPullback { square_index } => {
            format!("square #{square_index} is not a pullback")
        }
        RegularCriterionResult::ENotMono { square_index } => {
            format!("e of square #{square_index} is not a monomorphism")
        }
        RegularCriterionResult::MissingFiberProduct { square_index } => {
            format!("Y×_X Y or B×_A B is missing for square #{square_index}")
        }
        RegularCriterionResult::DerivedNotDistinguished { square_index } => {
            format!("the derived square of square #{square_index} is not distinguished")
        }
    };
    // the criterion is sufficient, not necessary: report it as
    // information, not a verdict
    r.push(
        "regularity criterion (sufficient)",
        "Lemma 2.11 criterion",
        if crit.holds() { Status::Pass } else { Status::Info },
        detail,
    );
    if crit.holds() && !reg.is_regular() {
        r.check(
            "criterion soundness",
            "Lemma 2.11 (criterion implies Def 2.10)",
            false,
            "the sufficient criterion holds but the definitional check fails",
        );
    }
    r.finish()
}

fn check_bounded(doc: &SiteDocument) -> Report {
    let Some(d) = &doc.density else {
        return Report::inapplicable("check bounded", "Def 2.22 boundedness", "no density block");
    };
    let mut r = Report::new("check bounded");
    let cat = &doc.cat;
    let b = is_bounded(cat, &doc.cd, d);
    let detail = match &b {
        BoundednessResult::Bounded => {
            "bounded: true — the supplied density structure is reducing and of finite dimension".to_string()
        }
        BoundednessResult::InvalidDensity(e) => format!("bounded: false — {e}"),
        BoundednessResult::NoReducingRefinement { square_index } => format!(
            "bounded: false — square #{square_index} admits no reducing refinement"
        ),
    };
    r.check("boundedness", "Def 2.22 boundedness", b.is_bounded(), detail);
    if validate_density(cat, d).is_ok() {
        for x in cat.objects() {
            r.push(
                format!("dim_D({})", cat.object_name(x)),
                "Def 2.20 dimension",
                Status::Info,
                format!("dim_D({}) = {}", cat.object_name(x), dimension(cat, d, x)),
            );
        }
    }
    r.finish()
}

// ------------------------------------------------------------------ sheaves

fn sheaf_check(doc: &SiteDocument, name: &str) -> Report {
    let mut r = Report::new("sheaf-check");
    let Some(p) = doc.presheaf(name) else {
        return unknown(&mut r, "presheaf", name);
    };
    let cat = &doc.cat;
    let Some(top) = topology_of(doc, &mut r) else {
        return r.finish();
    };
    let direct = is_sheaf(cat, &top, &p.presheaf);
    r.push(
        "sheaf condition",
        "§2 sheaf condition (unique gluing)",
        if direct { Status::Pass } else { Status::Info },
        format!("is_sheaf: {direct}"),
    );
    let crit = cd_sheaf_criterion(cat, &doc.cd, &p.presheaf);
    let detail = match &crit {
        CdSheafResult::Sheaf => "F(∅) = pt and every F(Q) is a pullback of sets".to_string(),
        CdSheafResult::BadInitialValue { object } => format!(
            "F({}) is not a single point",
            cat.object_name(*object)
        ),
        CdSheafResult::BadSquare { square_index } => {
            format!("F(Q) is not a pullback for square #{square_index}")
        }
    };
    r.push(
        "cd sheaf criterion",
        "Cor 2.17 sheaf criterion",
        if crit.is_sheaf() { Status::Pass } else { Status::Info },
        detail,
    );
    // on a complete and regular site the two must agree (Cor 2.17); on a
    // merely complete site sheaf ⇒ criterion (Lemma 2.9)
    let complete = matches!(is_complete(cat, &doc.cd), Ok(c) if c.is_complete());
    let regular = is_regular(cat, &doc.cd, &top).is_regular();
    if complete && regular {
        r.check(
            "criterion agreement",
            "Cor 2.17 (complete + regular)",
            direct == crit.is_sheaf(),
            format!("is_sheaf = {direct}, criterion = {}", crit.is_sheaf()),
        );
    } else if complete {
        r.check(
            "criterion necessity",
            "Lemma 2.9 (complete)",
            !direct || crit.is_sheaf(),
            "a sheaf on a complete site satisfies the cd criterion",
        );
    }
    r.finish()
}

fn sheafify_report(doc: &SiteDocument, name: &str) -> Report {
    let mut r = Report::new("sheafify");
    let Some(p) = doc.presheaf(name) else {
        return unknown(&mut r, "presheaf", name);
    };
    let cat = &doc.cat;
    let Some(top) = topology_of(doc, &mut r) else {
        return r.finish();
    };
    let s = sheafify(cat, &top, &p.presheaf);
    r.check(
        "sheafification is a sheaf",
        "§2 associated sheaf (plus construction)",
        is_sheaf(cat, &top, s.sheaf()),
        "two plus constructions produce a sheaf",
    );
    for x in cat.objects() {
        r.push(
            format!("sections over {}", cat.object_name(x)),
            "§2 associated sheaf (plus construction)",
            Status::Info,
            format!(
                "F({obj}) has {} elements, aF({obj}) has {}",
                p.presheaf.size(x),
                s.sheaf().size(x),
                obj = cat.object_name(x)
            ),
        );
    }
    r.finish()
}

// ---------------------------------------------------------------------- mv

fn mv(doc: &SiteDocument, square: &str, sheaf: &str, opts: &Options) -> Report {
    let mut r = Report::new("mv");
    let Some(q) = doc.square(square) else {
        return unknown(&mut r, "square", square);
    };
    let Some(f) = doc.absheaf(sheaf) else {
        return unknown(&mut r, "abelian presheaf", sheaf);
    };
    let cat = &doc.cat;
    let Some(top) = topology_of(doc, &mut r) else {
        return r.finish();
    };
    if !is_regular(cat, &doc.cd, &top).is_regular() {
        return Report::inapplicable(
            "mv",
            "Lemma 2.18 short exact sequence",
            "the cd-structure is not regular",
        );
    }
    let sx = mv_short_exact_check(cat, &top, q);
    r.check(
        "short exact sequence",
        "Lemma 2.18 short exact sequence",
        sx.is_ok(),
        match sx {
            Ok(()) => "0 → Z(ρB) → Z(ρA)⊕Z(ρY) → Z(ρX) → 0 is locally exact".to_string(),
            Err(e) => e,
        },
    );
    match recognize_open_site(cat, &doc.cd) {
        Some(rec) => {
            let diagram = cdsite::cohomology::stalk_diagram_from_recognition(cat, &rec, &f.presheaf);
            let points = |o: ObjId| -> Vec<usize> {
                rec.object_points[o.0]
                    .iter()
                    .enumerate()
                    .filter_map(|(i, &b)| b.then_some(i))
                    .collect()
            };
            let a_pts = points(q.corner_a(cat));
            let y_pts = points(q.corner_y(cat));
            match mv_check(&rec.space, &diagram, &a_pts, &y_pts, opts.max_degree) {
                Ok(data) => {
                    r.check(
                        "long exact sequence",
                        "Lemma 2.19 long exact sequence",
                        true,
                        format!(
                            "exact in degrees 0..={}; H^*(X): {}; H^*(A): {}; H^*(Y): {}; H^*(B): {}",
                            opts.max_degree,
                            groups_str(&data.h_union[..=opts.max_degree]),
                            groups_str(&data.h_a[..=opts.max_degree]),
                            groups_str(&data.h_y[..=opts.max_degree]),
                            groups_str(&data.h_inter[..=opts.max_degree]),
                        ),
                    );
                }
                Err(e) => {
                    r.check("long exact sequence", "Lemma 2.19 long exact sequence", false, e);
                }
            }
        }
        None => {
            r.push(
                "long exact sequence",
                "Lemma 2.19 long exact sequence",
                Status::Info,
                "skipped: the site is not recognized as the open-set site of a finite space",
            );
        }
    }
    r.finish()
}

// -------------------------------------------------------------- cohomology

fn cohomology(doc: &SiteDocument, object: &str, sheaf: &str, degree: usize) -> Report {
    let mut r = Report::new("cohomology");
    let cat = &doc.cat;
    let Some(x) = cat.object_by_name(object) else {
        return unknown(&mut r, "object", object);
    };
    let Some(f) = doc.absheaf(sheaf) else {
        return unknown(&mut r, "abelian presheaf", sheaf);
    };
    match sheaf_cohomology(cat, &doc.cd, &f.presheaf, x, degree) {
        Some((backend, hs)) => {
            r.push(
                "backend",
                "Theorem 2.26 context",
                Status::Info,
                format!("computed with the {backend} backend"),
            );
            r.push(
                format!("H^{degree}({object}, {sheaf})"),
                "Theorem 2.26 context",
                Status::Info,
                format!("H^{degree}({object}, {sheaf}) = {}", hs[degree]),
            );
        }
        None => {
            return Report::inapplicable(
                "cohomology",
                "Theorem 2.26 context",
                "no cohomology backend applies (site is neither a recognized finite-space site nor Čech-computable here)",
            );
        }
    }
    r.finish()
}

fn cohdim(doc: &SiteDocument) -> Report {
    let anchor = "Theorem 2.26 vanishing";
    let Some(d) = &doc.density else {
        return Report::inapplicable("cohdim", anchor, "no density block");
    };
    if doc.absheaves.is_empty() {
        return Report::inapplicable("cohdim", anchor, "no abelian presheaf blocks");
    }
    let mut r = Report::new("cohdim");
    let cat = &doc.cat;
    let mut all_ok = true;
    for f in &doc.absheaves {
        match cohdim_vanishing_check(cat, &doc.cd, d, &f.presheaf) {
            Ok(rep) => {
                let entries: Vec<String> = rep
                    .entries
                    .iter()
                    .map(|(x, dim, hs)| {
                        let hs: Vec<String> = hs
                            .iter()
                            .map(|(n, h)| format!("H^{n} = {h}"))
                            .collect();
                        format!("{} (dim {}): {}", cat.object_name(*x), dim, hs.join(", "))
                    })
                    .collect();
                all_ok &= rep.ok;
                r.check(
                    format!("vanishing for {}", f.name),
                    anchor,
                    rep.ok,
                    format!("[{} backend] {}", rep.backend, entries.join("; ")),
                );
            }
            Err(e) => {
                if e.starts_with("precondition failed") {
                    return Report::inapplicable(
                        "cohdim",
                        anchor,
                        e.trim_start_matches("precondition failed: "),
                    );
                }
                all_ok = false;
                r.check(format!("vanishing for {}", f.name), anchor, false, e);
            }
        }
    }
    r.check(
        "vanishing above dimension",
        anchor,
        all_ok,
        format!(
            "H^n(U, −) = 0 for dim_D(U) < n ≤ dim_D(U) + 2 across {} supplied sheaves",
            doc.absheaves.len()
        ),
    );
    r.finish()
}

// -------------------------------------------------------------- simplicial

fn identity_map(cat: &FiniteCategory, s: &cdsite::simplicial::TruncatedSimplicialObject) -> SimplicialMap {
    SimplicialMap {
        levels: s.levels.iter().map(|l| CoprodMap::identity(l, cat)).collect(),
    }
}

fn kq(doc: &SiteDocument, square: &str, opts: &Options) -> Report {
    let mut r = Report::new("kq");
    let Some(q) = doc.square(square) else {
        return unknown(&mut r, "square", square);
    };
    let cat = &doc.cat;
    let (kq, p_q) = build_kq(cat, q, opts.truncation);
    let levels: Vec<String> = kq
        .levels
        .iter()
        .map(|l| {
            let names: Vec<&str> = l.summands.iter().map(|&o| cat.object_name(o)).collect();
            names.join("⊔")
        })
        .collect();
    r.push(
        "levels",
        "§3 eq. (kq)",
        Status::Info,
        format!("K_Q = [{}] up to truncation {}", levels.join("; "), opts.truncation),
    );
    let ids = kq.check_identities(cat);
    r.check(
        "simplicial identities",
        "§5 simplicial identities",
        ids.is_ok(),
        ids.err().unwrap_or_else(|| "all face/degeneracy identities hold".to_string()),
    );
    let x = q.corner_x(cat);
    let x_const = cdsite::simplicial::TruncatedSimplicialObject::constant(cat, x, opts.truncation);
    r.check(
        "p_Q is simplicial",
        "§3 eq. (kq) (the morphism p_Q)",
        p_q.is_simplicial(cat, &kq, &x_const),
        "p_Q: K_Q → X commutes with faces and degeneracies",
    );
    if let Some(top) = topology_of(doc, &mut r) {
        r.check(
            "sheafified π₀(K_Q) → ρ(X)",
            "Lemma 3.6 + Cor 2.16",
            wp_pi0_check(cat, &top, q),
            "a(π₀(K_Q)) → a(y(X)) is an isomorphism of sheaves",
        );
    }
    r.finish()
}

fn cech_nerve_report(doc: &SiteDocument, morphism: &str, opts: &Options) -> Report {
    let mut r = Report::new("cech-nerve");
    let cat = &doc.cat;
    let Some(f) = cat.morphism_by_name(morphism) else {
        return unknown(&mut r, "morphism", morphism);
    };
    let Some((nerve, eta)) = cech_nerve(cat, f, opts.truncation) else {
        return Report::inapplicable(
            "cech-nerve",
            "§5 Čech nerve",
            format!("the iterated fiber powers of `{morphism}` do not all exist").as_str(),
        );
    };
    let levels: Vec<&str> = nerve
        .levels
        .iter()
        .map(|l| cat.object_name(l.summands[0]))
        .collect();
    r.push(
        "levels",
        "§5 Čech nerve",
        Status::Info,
        format!("Č(f) = [{}] up to truncation {}", levels.join("; "), opts.truncation),
    );
    let ids = nerve.check_identities(cat);
    r.check(
        "simplicial identities",
        "§5 simplicial identities",
        ids.is_ok(),
        ids.err().unwrap_or_else(|| "all face/degeneracy identities hold".to_string()),
    );
    let y_const = cdsite::simplicial::TruncatedSimplicialObject::constant(
        cat,
        cat.dst(f),
        opts.truncation,
    );
    r.check(
        "η(f) is simplicial",
        "Lemma 5.1 (the morphism η(f))",
        eta.is_simplicial(cat, &nerve, &y_const),
        "η(f): Č(f) → Y commutes with faces and degeneracies",
    );
    let sections: Vec<MorId> = cat
        .hom(cat.dst(f), cat.src(f))
        .into_iter()
        .filter(|&s| cat.compose(f, s) == cat.identity(cat.dst(f)))
        .collect();
    if sections.is_empty() {
        r.push(
            "section homotopy witness",
            "Lemma 5.1 homotopy equivalence",
            Status::Info,
            "skipped: f has no section",
        );
    } else {
        for s in sections {
            let sname = cat.morphism_name(s);
            match section_homotopy_witness(cat, f, s, opts.truncation) {
                Some((c, h)) => {
                    let from = SimplicialMap {
                        levels: (0..=opts.truncation)
                            .map(|n| c.levels[n].compose(cat, &eta.levels[n]))
                            .collect(),
                    };
                    let v = h.check(cat, &nerve, &nerve, &from, &identity_map(cat, &nerve));
                    r.check(
                        format!("homotopy witness for section {sname}"),
                        "Lemma 5.1 homotopy equivalence",
                        v.is_ok(),
                        match v {
                            Ok(()) => "c∘η ≃ id via the extra-degeneracy homotopy".to_string(),
                            Err(e) => e,
                        },
                    );
                }
                None => {
                    r.check(
                        format!("homotopy witness for section {sname}"),
                        "Lemma 5.1 homotopy equivalence",
                        false,
                        "the mediating maps for the homotopy do not exist",
                    );
                }
            }
        }
    }
    r.finish()
}

// ------------------------------------------------------------------ chunky

fn chunky_witness(doc: &SiteDocument) -> Result<ChunkyWitness, String> {
    match doc.designated_sums() {
        Some(sums) => why_not_chunky_with(&doc.cat, sums),
        None => why_not_chunky(&doc.cat),
    }
}

fn chunky(doc: &SiteDocument) -> Report {
    let mut r = Report::new("chunky");
    let cat = &doc.cat;
    match chunky_witness(doc) {
        Ok(w) => {
            r.check(
                "chunky",
                "Def 6.1 chunky category",
                true,
                format!(
                    "chunky: true — strict initial object `{}`, {} designated sums",
                    cat.object_name(w.initial),
                    w.sums.len()
                ),
            );
            let p = p_add(cat, &w);
            r.push(
                "p_add squares",
                "§6 cd-structure p_add",
                Status::Info,
                format!("{} distinguished squares", p.squares().len()),
            );
            let complete = matches!(is_complete(cat, &p), Ok(c) if c.is_complete());
            r.check("p_add complete", "Lemma 6.2 (complete)", complete, "Def 2.3 completeness for p_add");
            match cd_topology(cat, &p) {
                Ok(top) => {
                    r.check(
                        "p_add regular",
                        "Lemma 6.2 (regular)",
                        is_regular(cat, &p, &top).is_regular(),
                        "Def 2.10 regularity for p_add",
                    );
                }
                Err(e) => r.check("p_add regular", "Lemma 6.2 (regular)", false, e.to_string()),
            }
            let d = add_density(cat);
            r.check(
                "p_add bounded",
                "Lemma 6.2 (bounded)",
                is_bounded(cat, &p, &d).is_bounded(),
                "Def 2.22 boundedness for p_add with the coproduct density structure",
            );
        }
        Err(e) => {
            r.check("chunky", "Def 6.1 chunky category", false, format!("chunky: false — {e}"));
        }
    }
    r.finish()
}

fn radditivize_report(doc: &SiteDocument, name: &str) -> Report {
    let mut r = Report::new("radditivize");
    let Some(p) = doc.presheaf(name) else {
        return unknown(&mut r, "presheaf", name);
    };
    let cat = &doc.cat;
    let w = match chunky_witness(doc) {
        Ok(w) => w,
        Err(e) => {
            return Report::inapplicable(
                "radditivize",
                "Lemma 6.3 radditivization",
                &format!("the category is not chunky ({e})"),
            );
        }
    };
    let (rad, _unit) = radditivize(cat, &w, &p.presheaf);
    let sizes: Vec<String> = cat
        .objects()
        .map(|x| format!("{}: {} → {}", cat.object_name(x), p.presheaf.size(x), rad.size(x)))
        .collect();
    r.push(
        "sections",
        "§6 radditive functors",
        Status::Info,
        sizes.join(", "),
    );
    r.check(
        "result is radditive",
        "§6 radditive functors",
        is_radditive(cat, &w, &rad),
        "r(F) sends designated sums to products and the initial object to a point",
    );
    let m = radditivize_matches_sheafification(cat, &w, &p.presheaf);
    r.check(
        "matches t_add sheafification",
        "Lemma 6.3 radditivization",
        m.is_ok(),
        match m {
            Ok(()) => "r(F) ≅ a_{t_add}(F) naturally under F".to_string(),
            Err(e) => e,
        },
    );
    r.finish()
}

// ------------------------------------------------------------------- suite

/// Everything applicable, with check names namespaced by sub-command.
fn suite(doc: &SiteDocument, opts: &Options) -> Report {
    let mut r = Report::new("suite");
    r.absorb("validate", validate(doc));
    r.absorb("topology", topology_report(doc));
    r.absorb("simple-coverings", simple_coverings_report(doc));
    r.absorb("check complete", check_complete(doc));
    r.absorb("check regular", check_regular(doc));
    r.absorb("check bounded", check_bounded(doc));
    r.absorb("cohdim", cohdim(doc));
    if doc.chunky.is_some() {
        r.absorb("chunky", chunky(doc));
    } else {
        r.push(
            "chunky (skipped)",
            "Def 6.1 chunky category",
            Status::Info,
            "skipped: no chunky block in the site file",
        );
    }
    for p in &doc.presheaves {
        r.absorb(&format!("sheaf-check {}", p.name), sheaf_check(doc, &p.name));
        r.absorb(&format!("sheafify {}", p.name), sheafify_report(doc, &p.name));
        if doc.chunky.is_some() {
            r.absorb(
                &format!("radditivize {}", p.name),
                radditivize_report(doc, &p.name),
            );
        }
    }
    for name in &doc.square_names {
        r.absorb(&format!("kq {name}"), kq(doc, name, opts));
        for f in &doc.absheaves {
            r.absorb(&format!("mv {name} {}", f.name), mv(doc, name, &f.name, opts));
        }
    }
    // Čech nerves over every non-identity morphism, on small categories
    let cat = &doc.cat;
    if cat.morphism_count() <= 48 {
        for m in cat.morphisms() {
            if cat.is_identity(m) {
                continue;
            }
            let name = cat.morphism_name(m).to_string();
            r.absorb(&format!("cech-nerve {name}"), cech_nerve_report(doc, &name, opts));
        }
    } else {
        r.push(
            "cech-nerve (skipped)",
            "§5 Čech nerve",
            Status::Info,
            format!(
                "skipped: {} morphisms exceed the suite fan-out bound of 48",
                cat.morphism_count()
            ),
        );
    }
    r.finish()
}
