//! Bundled example categories.
//!
//! * `triv3`: three objects, identities only, trivial restriction.
//! * `max5a` / `max5b`: the monoid `{0..5}` under `max`, with `n̄ = n` and
//!   with `n̄ = n` for `n` zero or odd, `n̄ = n - 1` otherwise.
//! * `pfin2`: subsets of `{1,2}` and partial functions.
//! * `inj2`: subsets of `{1,2}` and total functions, with the injections.
//! * `ab2`: the groups `0`, `Z2`, `Z2+Z2` and all homomorphisms, with the
//!   injective ones.
//!
//! Function names follow `S->T[codes]`: one character per element of `S` in
//! increasing order, the image digit or `-` where undefined.

use std::collections::HashMap;

use crate::fincat::{FinCat, MorId, ObjId};
use crate::mcat::MSystem;
use crate::restriction::RestrCat;

pub fn triv3() -> RestrCat {
    let objects = vec!["A".to_string(), "B".to_string(), "C".to_string()];
    let morphisms = (0..3)
        .map(|i| (format!("id{}", objects[i]), ObjId(i), ObjId(i)))
        .collect();
    let cat =
        FinCat::from_fn(objects, morphisms, (0..3).map(MorId).collect(), |g, _| g).expect("identity-only category");
    RestrCat::trivial(cat)
}

fn max5() -> FinCat {
    let morphisms = (0..6).map(|n| (n.to_string(), ObjId(0), ObjId(0))).collect();
    FinCat::from_fn(vec!["*".to_string()], morphisms, vec![MorId(0)], |g, f| {
        MorId(g.0.max(f.0))
    })
    .expect("max monoid")
}

/// Every element a restriction idempotent.
pub fn max5_a() -> RestrCat {
    let cat = max5();
    let bar = cat.morphisms().collect();
    RestrCat::new(cat, bar).expect("max5a is a restriction category")
}

/// `n̄ = n` when `n` is zero or odd, `n - 1` otherwise.
pub fn max5_b() -> RestrCat {
    let cat = max5();
    let bar = cat
        .morphisms()
        .map(|n| if n.0 == 0 || n.0 % 2 == 1 { n } else { MorId(n.0 - 1) })
        .collect();
    RestrCat::new(cat, bar).expect("max5b is a restriction category")
}

const SUBSETS: [&[u8]; 4] = [&[], &[1], &[2], &[1, 2]];

fn subset_name(s: &[u8]) -> String {
    let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// A (partial) function between subsets, one optional image per element.
#[derive(Clone, PartialEq, Eq, Hash)]
struct SetMap {
    dom: usize,
    cod: usize,
    images: Vec<Option<u8>>,
}

impl SetMap {
    fn name(&self) -> String {
        let code: String = self
            .images
            .iter()
            .map(|i| i.map_or('-', |x| char::from(b'0' + x)))
            .collect();
        format!(
            "{}->{}[{}]",
            subset_name(SUBSETS[self.dom]),
            subset_name(SUBSETS[self.cod]),
            code
        )
    }

    fn apply(&self, x: u8) -> Option<u8> {
        let pos = SUBSETS[self.dom].iter().position(|&y| y == x)?;
        self.images[pos]
    }

    fn then(&self, g: &SetMap) -> SetMap {
        SetMap {
            dom: self.dom,
            cod: g.cod,
            images: SUBSETS[self.dom]
                .iter()
                .map(|&x| self.apply(x).and_then(|y| g.apply(y)))
                .collect(),
        }
    }

    fn is_total(&self) -> bool {
        self.images.iter().all(Option::is_some)
    }

    fn is_injective(&self) -> bool {
        let defined: Vec<u8> = self.images.iter().flatten().copied().collect();
        let mut dedup = defined.clone();
        dedup.sort();
        dedup.dedup();
        dedup.len() == defined.len()
    }
}

fn set_maps(partial: bool) -> Vec<SetMap> {
    let mut out = Vec::new();
    for (dom, dom_elems) in SUBSETS.iter().enumerate() {
        for (cod, cod_elems) in SUBSETS.iter().enumerate() {
            let mut choices: Vec<Option<u8>> = Vec::new();
            if partial {
                choices.push(None);
            }
            choices.extend(cod_elems.iter().map(|&y| Some(y)));
            let mut acc: Vec<Vec<Option<u8>>> = vec![Vec::new()];
            for _ in dom_elems.iter() {
                acc = acc
                    .into_iter()
                    .flat_map(|prefix| {
                        choices.iter().map(move |&c| {
                            let mut p = prefix.clone();
                            p.push(c);
                            p
                        })
                    })
                    .collect();
            }
            out.extend(acc.into_iter().map(|images| SetMap { dom, cod, images }));
        }
    }
    out
}

fn set_category(maps: &[SetMap]) -> FinCat {
    let index: HashMap<&SetMap, MorId> = maps.iter().enumerate().map(|(i, m)| (m, MorId(i))).collect();
    let objects = SUBSETS.iter().map(|s| subset_name(s)).collect();
    let morphisms = maps.iter().map(|m| (m.name(), ObjId(m.dom), ObjId(m.cod))).collect();
    let identities = (0..4)
        .map(|d| {
            let id = SetMap {
                dom: d,
                cod: d,
                images: SUBSETS[d].iter().map(|&x| Some(x)).collect(),
            };
            index[&id]
        })
        .collect();
    FinCat::from_fn(objects, morphisms, identities, |g, f| {
        index[&maps[f.0].then(&maps[g.0])]
    })
    .expect("functions compose associatively")
}

/// Subsets of `{1,2}` and partial functions, restricted to domains of definition.
pub fn pfin2() -> RestrCat {
    let maps = set_maps(true);
    let cat = set_category(&maps);
    let bar = maps
        .iter()
        .map(|m| {
            let dom_of_def = SetMap {
                dom: m.dom,
                cod: m.dom,
                images: SUBSETS[m.dom]
                    .iter()
                    .zip(&m.images)
                    .map(|(&x, i)| i.map(|_| x))
                    .collect(),
            };
            cat.mor(&dom_of_def.name()).expect("partial identity exists")
        })
        .collect();
    RestrCat::new(cat, bar).expect("pfin2 is a restriction category")
}

/// Subsets of `{1,2}` and total functions, with the injections.
pub fn inj2() -> (FinCat, MSystem) {
    let maps = set_maps(false);
    debug_assert!(maps.iter().all(SetMap::is_total));
    let cat = set_category(&maps);
    let members: Vec<MorId> = maps
        .iter()
        .enumerate()
        .filter(|(_, m)| m.is_injective())
        .map(|(i, _)| MorId(i))
        .collect();
    let m = MSystem::new(&cat, members).expect("injections are a stable system");
    (cat, m)
}

const GROUPS: [&str; 3] = ["0", "Z2", "Z2+Z2"];
const SHORT: [&str; 3] = ["0", "Z2", "V"];

/// A homomorphism `Z2^dom → Z2^cod` as a row-major bit matrix.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Hom {
    dom: usize,
    cod: usize,
    bits: u32,
}

impl Hom {
    fn entry(&self, r: usize, c: usize) -> u32 {
        (self.bits >> (r * self.dom + c)) & 1
    }

    fn apply(&self, v: u32) -> u32 {
        (0..self.cod).fold(0, |acc, r| {
            let bit = (0..self.dom).fold(0, |s, c| s ^ (self.entry(r, c) & (v >> c) & 1));
            acc | (bit << r)
        })
    }

    fn then(&self, g: &Hom) -> Hom {
        let mut bits = 0;
        for c in 0..self.dom {
            let image = g.apply(self.apply(1 << c));
            for r in 0..g.cod {
                bits |= ((image >> r) & 1) << (r * self.dom + c);
            }
        }
        Hom {
            dom: self.dom,
            cod: g.cod,
            bits,
        }
    }

    fn is_injective(&self) -> bool {
        (1..(1u32 << self.dom)).all(|v| self.apply(v) != 0)
    }

    fn name(&self) -> String {
        let (d, c, b) = (self.dom, self.cod, self.bits);
        match (d, c) {
            (0, 0) => "id0".to_string(),
            (1, 1) if b == 1 => "idZ2".to_string(),
            (1, 2) if b > 0 => ["i1", "i2", "diag"][b as usize - 1].to_string(),
            (2, 1) if b > 0 => ["p1", "p2", "sum"][b as usize - 1].to_string(),
            (2, 2) if b == 9 => "idV".to_string(),
            (2, 2) => format!("m[{}{}{}{}]", b & 1, (b >> 1) & 1, (b >> 2) & 1, (b >> 3) & 1),
            _ => format!("zero_{}_{}", SHORT[d], SHORT[c]),
        }
    }
}

/// The groups `0`, `Z2`, `Z2+Z2` and all homomorphisms, with the injective ones.
pub fn ab2() -> (FinCat, MSystem) {
    let mut homs = Vec::new();
    for dom in 0..3 {
        for cod in 0..3 {
            for bits in 0..(1u32 << (dom * cod)) {
                homs.push(Hom { dom, cod, bits });
            }
        }
    }
    let index: HashMap<Hom, MorId> = homs.iter().enumerate().map(|(i, h)| (*h, MorId(i))).collect();
    let identities = [
        Hom {
            dom: 0,
            cod: 0,
            bits: 0,
        },
        Hom {
            dom: 1,
            cod: 1,
            bits: 1,
        },
        Hom {
            dom: 2,
            cod: 2,
            bits: 9,
        },
    ]
    .iter()
    .map(|h| index[h])
    .collect();
    let cat = FinCat::from_fn(
        GROUPS.iter().map(|s| s.to_string()).collect(),
        homs.iter().map(|h| (h.name(), ObjId(h.dom), ObjId(h.cod))).collect(),
        identities,
        |g, f| index[&homs[f.0].then(&homs[g.0])],
    )
    .expect("homomorphisms compose associatively");
    let members: Vec<MorId> = homs
        .iter()
        .enumerate()
        .filter(|(_, h)| h.is_injective())
        .map(|(i, _)| MorId(i))
        .collect();
    let m = MSystem::new(&cat, members).expect("injective homomorphisms are a stable system");
    (cat, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(triv3().cat().num_morphisms(), 3);
        assert_eq!(max5_a().cat().num_morphisms(), 6);
        assert_eq!(pfin2().cat().num_morphisms(), 38);
        let (inj, m) = inj2();
        assert_eq!(inj.num_morphisms(), 18);
        assert_eq!(m.len(), 14);
        let (ab, m) = ab2();
        assert_eq!(ab.num_morphisms(), 31);
        assert_eq!(m.len(), 1 + 1 + 1 + 1 + 3 + 6);
    }

    #[test]
    fn ab2_names_are_unique_and_meaningful() {
        let (ab, _) = ab2();
        let diag = ab.mor("diag").unwrap();
        let sum = ab.mor("sum").unwrap();
        assert_eq!(ab.mor_name(ab.compose(sum, diag)), "zero_Z2_Z2");
        let p1 = ab.mor("p1").unwrap();
        assert_eq!(ab.mor_name(ab.compose(p1, diag)), "idZ2");
    }
}
