//! Named example systems with their reference values.
//!
//! | name | system |
//! |------|--------|
//! | `cantor-1-3` | middle-third Cantor set |
//! | `cantor-lambda(λ)` | `{λx, λx + 1 - λ}` |
//! | `sym-cantor(λ1,λ2)` | `{λ1 x, λ2 x + (1-λ2)/2, λ1 x + 1 - λ1}`, default `(1/8, 1/5)` |
//! | `planar4(λ1,λ2[,λ3,λ4])` | four planar homotheties towards the unit square corners, default `(1/400, 1/20)` |
//! | `sierpinski(r)` | three homotheties towards the unit triangle vertices, default `r = 0.2` |
//! | `quarter-cantor` | planar 1/4-Cantor set |
//!
//! The four-corner system has a known closed form only under two further
//! parameter conditions (involving the quantities `d_min^k`); those are not
//! checked here, so only the default parameters carry a proven value.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, IfsSystem, Similitude};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Proven,
    Conjectural,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceValue {
    pub value: f64,
    pub status: Status,
}

#[derive(Debug, Clone)]
pub struct GalleryEntry {
    pub name: String,
    pub system: IfsSystem,
    /// Similarity dimension from its closed form.
    pub expected_s: f64,
    pub expected_csm: Option<ReferenceValue>,
    /// Known rigorous upper bound and the generation it comes from.
    pub certified_bound: Option<(usize, f64)>,
    /// Published algorithm output `(generation, m_tilde)`, five or six
    /// significant digits, generations consecutive from 0.
    pub expected_table: Vec<(usize, f64)>,
    pub reference: &'static str,
    pub warnings: Vec<String>,
}

/// Canonical names of the fixed catalog entries.
pub const CATALOG: &[&str] = &[
    "cantor-1-3",
    "cantor-lambda(1/4)",
    "sym-cantor(1/8,1/5)",
    "planar4(1/400,1/20)",
    "sierpinski(0.2)",
    "sierpinski(1/3)",
    "quarter-cantor",
];

const PATTERNS: &str = "cantor-1-3, cantor-lambda(<λ>), sym-cantor[(<λ1>,<λ2>)], \
planar4[(<λ1>,<λ2>[,<λ3>,<λ4>])], sierpinski[(<r>)], quarter-cantor";

/// All entries of [`CATALOG`].
pub fn catalog() -> Vec<GalleryEntry> {
    CATALOG.iter().map(|n| get(n).expect("catalog names resolve")).collect()
}

fn unknown(name: &str) -> Error {
    Error::UnknownSystem { name: name.to_string(), catalog: PATTERNS.to_string() }
}

fn parse_number(s: &str) -> Option<f64> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => Some(a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?),
        None => s.parse().ok(),
    }
}

fn split_name(name: &str) -> Option<(&str, Vec<f64>)> {
    let name = name.trim();
    match name.find('(') {
        None => Some((name, Vec::new())),
        Some(open) => {
            let inner = name[open + 1..].strip_suffix(')')?;
            let args = inner.split(',').map(parse_number).collect::<Option<Vec<_>>>()?;
            Some((&name[..open], args))
        }
    }
}

fn homotheties(maps: &[(f64, Vec<f64>)]) -> Result<IfsSystem, Error> {
    let maps = maps
        .iter()
        .enumerate()
        .map(|(i, (r, b))| Similitude::homothety(*r, b.clone()).map_err(|e| e.at_map(i)))
        .collect::<Result<Vec<_>, _>>()?;
    IfsSystem::new(maps)
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<(), Error> {
    if value > lo && value <= hi {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

fn table(values: &[f64]) -> Vec<(usize, f64)> {
    values.iter().copied().enumerate().collect()
}

/// Looks up a gallery system by name.
pub fn get(name: &str) -> Result<GalleryEntry, Error> {
    let (base, args) = split_name(name).ok_or_else(|| unknown(name))?;
    match (base, args.as_slice()) {
        ("cantor-1-3", []) => {
            let mut e = cantor_lambda(1.0 / 3.0)?;
            e.name = "cantor-1-3".into();
            Ok(e)
        }
        ("cantor-lambda", [lambda]) => cantor_lambda(*lambda),
        ("sym-cantor", []) => sym_cantor(1.0 / 8.0, 1.0 / 5.0),
        ("sym-cantor", [a, b]) => sym_cantor(*a, *b),
        ("planar4", []) => planar4([1.0 / 400.0, 1.0 / 20.0, 1.0 / 400.0, 1.0 / 20.0]),
        ("planar4", [a, b]) => planar4([*a, *b, *a, *b]),
        ("planar4", [a, b, c, d]) => planar4([*a, *b, *c, *d]),
        ("sierpinski", []) => sierpinski(0.2),
        ("sierpinski", [r]) => sierpinski(*r),
        ("quarter-cantor", []) => quarter_cantor(),
        _ => Err(unknown(name)),
    }
}

fn cantor_lambda(lambda: f64) -> Result<GalleryEntry, Error> {
    check_range("cantor lambda", lambda, 0.0, 0.5 - 1e-12)?;
    let system = homotheties(&[(lambda, vec![0.0]), (lambda, vec![1.0 - lambda])])?;
    let s = libm::log(2.0) / -libm::log(lambda);
    let expected_csm = (lambda <= 1.0 / 3.0)
        .then(|| ReferenceValue { value: libm::pow(2.0 * (1.0 - lambda), s), status: Status::Proven });
    let expected_table = if lambda == 1.0 / 3.0 {
        let mut v = vec![1.54856, 1.03238];
        v.extend([1.19902; 12]);
        table(&v)
    } else {
        Vec::new()
    };
    Ok(GalleryEntry {
        name: format!("cantor-lambda({lambda})"),
        system,
        expected_s: s,
        expected_csm,
        certified_bound: None,
        expected_table,
        reference: "λ-Cantor set, C^s = 2^s (1-λ)^s for λ <= 1/3",
        warnings: Vec::new(),
    })
}

fn sym_cantor(l1: f64, l2: f64) -> Result<GalleryEntry, Error> {
    check_range("sym-cantor lambda1", l1, 0.0, 0.5)?;
    check_range("sym-cantor lambda2", l2, 0.0, 1.0)?;
    if 2.0 * l1 + l2 >= 1.0 {
        return Err(Error::InvalidParameter { name: "sym-cantor 2*lambda1 + lambda2", value: 2.0 * l1 + l2 });
    }
    let system = homotheties(&[(l1, vec![0.0]), (l2, vec![(1.0 - l2) / 2.0]), (l1, vec![1.0 - l1])])?;
    let s = system.dimension();
    let admissible = (1.0 - 2.0 * l1 - l2) / 2.0 >= l1.max(l2);
    let mut warnings = Vec::new();
    if !admissible {
        warnings.push(format!(
            "(1 - 2λ1 - λ2)/2 = {} < max(λ1, λ2) = {}: C^s = 1 is not known for these parameters",
            (1.0 - 2.0 * l1 - l2) / 2.0,
            l1.max(l2)
        ));
    }
    let paper = l1 == 1.0 / 8.0 && l2 == 1.0 / 5.0;
    Ok(GalleryEntry {
        name: format!("sym-cantor({l1},{l2})"),
        system,
        expected_s: s,
        expected_csm: admissible.then_some(ReferenceValue { value: 1.0, status: Status::Proven }),
        certified_bound: None,
        expected_table: if paper { table(&[1.0; 4]) } else { Vec::new() },
        reference: "(λ1, λ2)-symmetric Cantor set, C^s = 1 when (1-2λ1-λ2)/2 >= max(λ1, λ2)",
        warnings,
    })
}

fn planar4(l: [f64; 4]) -> Result<GalleryEntry, Error> {
    let cap = 1.0 / (2.0 + core::f64::consts::SQRT_2);
    for &x in &l {
        check_range("planar4 lambda", x, 0.0, cap + 1e-15)?;
    }
    let system = homotheties(&[
        (l[0], vec![0.0, 0.0]),
        (l[1], vec![1.0 - l[1], 0.0]),
        (l[2], vec![1.0 - l[2], 1.0 - l[2]]),
        (l[3], vec![0.0, 1.0 - l[3]]),
    ])?;
    let s = system.dimension();
    let closed =
        l.iter().map(|&x| libm::pow(2.0 * core::f64::consts::SQRT_2 * (1.0 - x), s)).fold(f64::INFINITY, f64::min);
    let paper = l == [1.0 / 400.0, 1.0 / 20.0, 1.0 / 400.0, 1.0 / 20.0];
    let mut expected_table = vec![1.4174];
    expected_table.extend([1.39321; 5]);
    Ok(GalleryEntry {
        name: format!("planar4({},{},{},{})", l[0], l[1], l[2], l[3]),
        system,
        expected_s: if paper { libm::log(libm::sqrt(3.0) + 1.0) / libm::log(20.0) } else { s },
        expected_csm: Some(ReferenceValue {
            value: closed,
            status: if paper { Status::Proven } else { Status::Conjectural },
        }),
        certified_bound: None,
        expected_table: if paper { table(&expected_table) } else { Vec::new() },
        reference: "planar four-corner Cantor set, C^s = min_t (2√2 (1-λ_t))^s",
        warnings: Vec::new(),
    })
}

fn sierpinski(r: f64) -> Result<GalleryEntry, Error> {
    check_range("sierpinski ratio", r, 0.0, 0.5 - 1e-12)?;
    let h = libm::sqrt(3.0) / 2.0;
    let system =
        homotheties(&[(r, vec![0.0, 0.0]), (r, vec![1.0 - r, 0.0]), (r, vec![0.5 * (1.0 - r), (1.0 - r) * h])])?;
    let s = libm::log(3.0) / -libm::log(r);
    let third = r == 1.0 / 3.0;
    let expected_csm = if r < 0.25 {
        Some(ReferenceValue {
            value: libm::pow(2.0 * (1.0 - r) * libm::sqrt(r * r + r + 1.0), s),
            status: Status::Conjectural,
        })
    } else if third {
        Some(ReferenceValue { value: 1.537, status: Status::Conjectural })
    } else {
        None
    };
    let expected_table = if r == 0.2 {
        let mut v = vec![1.60504, 1.51231];
        v.extend([1.48326; 7]);
        table(&v)
    } else {
        Vec::new()
    };
    Ok(GalleryEntry {
        name: format!("sierpinski({r})"),
        system,
        expected_s: s,
        expected_csm,
        certified_bound: None,
        expected_table,
        reference: "Sierpinski gasket S(r), conjectured C^s = [2(1-r)(r²+r+1)^½]^s for r < 1/4",
        warnings: Vec::new(),
    })
}

fn quarter_cantor() -> Result<GalleryEntry, Error> {
    let system = homotheties(&[
        (0.25, vec![0.0, 0.0]),
        (0.25, vec![0.75, 0.0]),
        (0.25, vec![0.0, 0.75]),
        (0.25, vec![0.75, 0.75]),
    ])?;
    Ok(GalleryEntry {
        name: "quarter-cantor".into(),
        system,
        expected_s: 1.0,
        expected_csm: Some(ReferenceValue { value: 1.95, status: Status::Conjectural }),
        certified_bound: Some((3, 1.95542)),
        expected_table: table(&[2.66667, 1.92296, 1.95814, 1.95542, 1.95306, 1.95388, 1.95417]),
        reference: "planar 1/4-Cantor set, conjectured C^1 ≈ 1.95",
        warnings: Vec::new(),
    })
}
