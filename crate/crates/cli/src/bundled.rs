//! The bundled example documents, constructed programmatically; the
//! committed `fixtures/*.site` files are their serializations (a test
//! keeps them in sync).

use crate::format::{DesignatedSum, NamedAbPresheaf, NamedSetPresheaf, SiteDocument};
use cdsite::abelian::FgAbGroup;
use cdsite::absheaf::AbPresheaf;
use cdsite::fincat::FiniteCategory;
use cdsite::fixtures;
use cdsite::presheaf::{constant_presheaf, yoneda, SetPresheaf};

fn named(name: &str, cat: &FiniteCategory, p: SetPresheaf) -> NamedSetPresheaf {
    let elements = cat
        .objects()
        .map(|x| (0..p.size(x)).map(|i| format!("e{i}")).collect())
        .collect();
    NamedSetPresheaf {
        name: name.to_string(),
        presheaf: p,
        elements,
    }
}

/// Matches the parser's canonical form: level classes sorted by id.
fn canon_density(mut d: cdsite::density::DensityStructure) -> cdsite::density::DensityStructure {
    for v in d.levels.values_mut() {
        v.sort();
        v.dedup();
    }
    d
}

fn square_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("Q{i}")).collect()
}

/// The five-object toy site with its density structure and a small
/// presheaf family.
pub fn toy_document() -> SiteDocument {
    let toy = fixtures::toy_site();
    let density = canon_density(fixtures::toy_density(&toy));
    let cat = toy.cat;
    let presheaves = vec![
        named("yX", &cat, yoneda(&cat, toy.o_x).0),
        named("two", &cat, constant_presheaf(&cat, 2)),
    ];
    let absheaves = vec![
        NamedAbPresheaf {
            name: "Z".to_string(),
            presheaf: AbPresheaf::constant(&cat, FgAbGroup::free(1)),
        },
        NamedAbPresheaf {
            name: "Zmod2".to_string(),
            presheaf: AbPresheaf::constant(
                &cat,
                FgAbGroup {
                    rank: 0,
                    torsion: vec![2],
                },
            ),
        },
    ];
    let n = toy.cd.squares().len();
    SiteDocument {
        cat,
        cd: toy.cd,
        square_names: square_names(n),
        density: Some(density),
        presheaves,
        absheaves,
        chunky: None,
    }
}

/// The open-set site of the four-point circle, with a density structure
/// and the constant sheaf Z.
pub fn circle_document() -> SiteDocument {
    let space = fixtures::circle_space();
    let site = fixtures::open_site(&space);
    let density = canon_density(fixtures::open_site_density(&site));
    let cat = site.cat;
    let whole = cat
        .objects()
        .find(|&o| site.opens[o.0].iter().all(|&b| b))
        .expect("whole-space object");
    let presheaves = vec![
        named("yCircle", &cat, yoneda(&cat, whole).0),
        named("two", &cat, constant_presheaf(&cat, 2)),
    ];
    let absheaves = vec![NamedAbPresheaf {
        name: "Z".to_string(),
        presheaf: AbPresheaf::constant(&cat, FgAbGroup::free(1)),
    }];
    let n = site.cd.squares().len();
    SiteDocument {
        cat,
        cd: site.cd,
        square_names: square_names(n),
        density: Some(density),
        presheaves,
        absheaves,
        chunky: None,
    }
}

/// The skeleton of finite sets of size ≤ 2, as a chunky category with
/// its additive cd-structure and coproduct density structure.
pub fn finset2_document() -> SiteDocument {
    let sk = fixtures::finset_skeleton(2);
    let sums = sk.designated_sums();
    let cat = sk.cat;
    let witness =
        cdsite::chunky::why_not_chunky_with(&cat, sums.clone()).expect("finset2 is chunky");
    let cd = cdsite::chunky::p_add(&cat, &witness);
    let density = canon_density(cdsite::chunky::add_density(&cat));
    let chunky: Vec<DesignatedSum> = sums
        .into_iter()
        .map(|((x, y), (apex, ix, iy))| DesignatedSum { x, y, apex, ix, iy })
        .collect();
    let presheaves = vec![
        named("y1", &cat, yoneda(&cat, sk.objs[1]).0),
        named("two", &cat, constant_presheaf(&cat, 2)),
    ];
    let absheaves = vec![NamedAbPresheaf {
        name: "Z".to_string(),
        presheaf: AbPresheaf::constant(&cat, FgAbGroup::free(1)),
    }];
    let n = cd.squares().len();
    SiteDocument {
        cat,
        cd,
        square_names: square_names(n),
        density: Some(density),
        presheaves,
        absheaves,
        chunky: Some(chunky),
    }
}

/// (file name, document) for every bundled fixture.
pub fn bundled_documents() -> Vec<(&'static str, SiteDocument)> {
    vec![
        ("toy.site", toy_document()),
        ("circle.site", circle_document()),
        ("finset2.site", finset2_document()),
    ]
}
