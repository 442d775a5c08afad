//! JSON file formats for categories, presheaves and natural maps.
//!
//! Every type rejects unknown keys, and writing then reading a value gives
//! back a structurally equal one.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{FinCat, MorId, ObjId};
use crate::mcat::{check_msystem, MSystem};
use crate::presheaf::{check_presheaf, check_presheaf_map, Presheaf, PresheafMap};
use crate::report::CheckReport;
use crate::restriction::{check_restriction_structure, RestrCat};
use crate::rpsh::{check_restriction_presheaf, RestrictionPresheaf};

/// Element names and action table of a presheaf.
type Tables = (Vec<Vec<String>>, Vec<Vec<usize>>);

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismEntry {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

/// A finite category, optionally with a restriction structure and a system
/// of monics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismEntry>,
    /// Object id to identity morphism id.
    pub identities: BTreeMap<String, String>,
    /// Triples `[g, f, g∘f]`.
    pub composition: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restriction: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub msystem: Option<Vec<String>>,
}

/// A category file resolved to validated structures.
#[derive(Debug, Clone)]
pub struct LoadedCategory {
    pub cat: FinCat,
    pub restr: Option<RestrCat>,
    pub msystem: Option<MSystem>,
}

impl LoadedCategory {
    pub fn restriction(&self) -> Result<&RestrCat> {
        self.restr
            .as_ref()
            .ok_or_else(|| Error::input("the category file has no `restriction` key"))
    }

    pub fn m_system(&self) -> Result<&MSystem> {
        self.msystem
            .as_ref()
            .ok_or_else(|| Error::input("the category file has no `msystem` key"))
    }
}

impl CategoryFile {
    pub fn from_cat(c: &FinCat) -> CategoryFile {
        CategoryFile {
            objects: c.objects().map(|a| c.obj_name(a).to_string()).collect(),
            morphisms: c
                .morphisms()
                .map(|f| MorphismEntry {
                    id: c.mor_name(f).to_string(),
                    dom: c.obj_name(c.dom(f)).to_string(),
                    cod: c.obj_name(c.cod(f)).to_string(),
                })
                .collect(),
            identities: c
                .objects()
                .map(|a| (c.obj_name(a).to_string(), c.mor_name(c.id(a)).to_string()))
                .collect(),
            composition: c
                .composition_entries()
                .into_iter()
                .map(|(g, f, gf)| [g, f, gf].map(|m| c.mor_name(m).to_string()))
                .collect(),
            restriction: None,
            msystem: None,
        }
    }

    pub fn from_restr(x: &RestrCat) -> CategoryFile {
        let c = x.cat();
        let mut out = CategoryFile::from_cat(c);
        out.restriction = Some(
            c.morphisms()
                .map(|f| (c.mor_name(f).to_string(), c.mor_name(x.bar(f)).to_string()))
                .collect(),
        );
        out
    }

    pub fn with_msystem(mut self, c: &FinCat, ms: &MSystem) -> CategoryFile {
        self.msystem = Some(ms.members().map(|m| c.mor_name(m).to_string()).collect());
        self
    }

    pub fn parse(text: &str) -> Result<CategoryFile> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<CategoryFile> {
        CategoryFile::parse(&read_text(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("category files always serialize")
    }

    /// Resolve names without checking the category laws.
    fn assemble(&self) -> Result<FinCat> {
        let obj = |name: &str| {
            self.objects
                .iter()
                .position(|o| o == name)
                .map(ObjId)
                .ok_or_else(|| Error::UnknownObject(name.to_string()))
        };
        let mor = |name: &str| {
            self.morphisms
                .iter()
                .position(|m| m.id == name)
                .map(MorId)
                .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
        };
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Ok((m.id.clone(), obj(&m.dom)?, obj(&m.cod)?)))
            .collect::<Result<Vec<_>>>()?;
        if let Some(extra) = self.identities.keys().find(|k| !self.objects.contains(k)) {
            return Err(Error::UnknownObject(extra.clone()));
        }
        let identities = self
            .objects
            .iter()
            .map(|o| {
                let id = self
                    .identities
                    .get(o)
                    .ok_or_else(|| Error::input(format!("no identity given for `{o}`")))?;
                mor(id)
            })
            .collect::<Result<Vec<_>>>()?;
        let composition = self
            .composition
            .iter()
            .map(|[g, f, gf]| Ok((mor(g)?, mor(f)?, mor(gf)?)))
            .collect::<Result<Vec<_>>>()?;
        FinCat::assemble(self.objects.clone(), morphisms, identities, composition)
    }

    fn bar(&self, c: &FinCat) -> Result<Option<Vec<MorId>>> {
        let Some(table) = &self.restriction else {
            return Ok(None);
        };
        if let Some(extra) = table.keys().find(|k| c.mor(k).is_err()) {
            return Err(Error::UnknownMorphism(extra.clone()));
        }
        c.morphisms()
            .map(|f| {
                let b = table
                    .get(c.mor_name(f))
                    .ok_or_else(|| Error::input(format!("no restriction given for `{}`", c.mor_name(f))))?;
                c.mor(b)
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn members(&self, c: &FinCat) -> Result<Option<Vec<MorId>>> {
        self.msystem
            .as_ref()
            .map(|ms| ms.iter().map(|m| c.mor(m)).collect::<Result<Vec<_>>>())
            .transpose()
    }

    /// Check the category laws and, where present, the restriction axioms and
    /// the stable-system conditions. Malformed data is an error; failed laws
    /// are reported.
    pub fn check(&self) -> Result<CheckReport> {
        let c = self.assemble()?;
        let mut r = CheckReport::new("category-file");
        let laws = c.check_laws();
        let ok = laws.passed();
        r.absorb("category", laws);
        if !ok {
            return Ok(r.finish());
        }
        if let Some(bar) = self.bar(&c)? {
            r.absorb("restriction", check_restriction_structure(&c, &bar)?);
        }
        if let Some(ms) = self.members(&c)? {
            r.absorb("msystem", check_msystem(&c, &ms)?);
        }
        Ok(r.finish())
    }

    /// Build validated structures; any failed law is an error.
    pub fn load(&self) -> Result<LoadedCategory> {
        let c = self.assemble()?;
        let laws = c.check_laws();
        if !laws.passed() {
            return Err(Error::Laws(Box::new(laws)));
        }
        let restr = self.bar(&c)?.map(|bar| RestrCat::new(c.clone(), bar)).transpose()?;
        let msystem = self.members(&c)?.map(|ms| MSystem::new(&c, ms)).transpose()?;
        Ok(LoadedCategory { cat: c, restr, msystem })
    }
}

/// The base category of a presheaf: a path (relative to the presheaf file)
/// or an inline category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseRef {
    Path(String),
    Inline(Box<CategoryFile>),
}

impl BaseRef {
    pub fn resolve(&self, dir: &Path) -> Result<CategoryFile> {
        match self {
            BaseRef::Path(p) => CategoryFile::read(&dir.join(p)),
            BaseRef::Inline(c) => Ok((**c).clone()),
        }
    }
}

/// A presheaf, optionally with a restriction on each element keyed
/// `"object:element"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafFile {
    pub base: BaseRef,
    /// Object id to its elements, in order.
    pub sets: BTreeMap<String, Vec<String>>,
    /// Triples `[f, x, y]` meaning `x·f = y`.
    pub actions: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restriction: Option<BTreeMap<String, String>>,
}

impl PresheafFile {
    pub fn from_presheaf(c: &FinCat, p: &Presheaf, base: BaseRef) -> PresheafFile {
        let sets = c
            .objects()
            .map(|a| (c.obj_name(a).to_string(), p.set(a).to_vec()))
            .collect();
        let mut actions = Vec::new();
        for f in c.morphisms() {
            let (a, b) = (c.dom(f), c.cod(f));
            for x in 0..p.len(b) {
                actions.push([
                    c.mor_name(f).to_string(),
                    p.elem_name(b, x).to_string(),
                    p.elem_name(a, p.act(f, x)).to_string(),
                ]);
            }
        }
        PresheafFile {
            base,
            sets,
            actions,
            restriction: None,
        }
    }

    pub fn from_restriction_presheaf(x: &RestrCat, q: &RestrictionPresheaf, base: BaseRef) -> PresheafFile {
        let c = x.cat();
        let p = q.psh();
        let mut out = PresheafFile::from_presheaf(c, p, base);
        out.restriction = Some(
            p.elements()
                .into_iter()
                .map(|(a, i)| {
                    let key = format!("{}:{}", c.obj_name(a), p.elem_name(a, i));
                    (key, c.mor_name(q.elbar(a, i)).to_string())
                })
                .collect(),
        );
        out
    }

    pub fn parse(text: &str) -> Result<PresheafFile> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<PresheafFile> {
        PresheafFile::parse(&read_text(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presheaf files always serialize")
    }

    /// Sets and action table, checked for shape but not for laws.
    fn tables(&self, c: &FinCat) -> Result<Tables> {
        if let Some(extra) = self.sets.keys().find(|k| c.obj(k).is_err()) {
            return Err(Error::UnknownObject(extra.clone()));
        }
        let sets: Vec<Vec<String>> = c
            .objects()
            .map(|a| self.sets.get(c.obj_name(a)).cloned().unwrap_or_default())
            .collect();
        let index = |a: ObjId, name: &str| {
            sets[a.0]
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| Error::input(format!("`{name}` is not an element at `{}`", c.obj_name(a))))
        };
        let mut act: Vec<Vec<Option<usize>>> = c.morphisms().map(|f| vec![None; sets[c.cod(f).0].len()]).collect();
        for [f, x, y] in &self.actions {
            let f = c.mor(f)?;
            let (xi, yi) = (index(c.cod(f), x)?, index(c.dom(f), y)?);
            if act[f.0][xi].replace(yi).is_some() {
                return Err(Error::input(format!(
                    "action of `{}` on `{x}` given twice",
                    c.mor_name(f)
                )));
            }
        }
        let act = act
            .into_iter()
            .enumerate()
            .map(|(f, row)| {
                row.into_iter()
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::input(format!("action of `{}` is incomplete", c.mor_name(MorId(f)))))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((sets, act))
    }

    fn elbar(&self, c: &FinCat, sets: &[Vec<String>]) -> Result<Option<Vec<Vec<MorId>>>> {
        let Some(table) = &self.restriction else {
            return Ok(None);
        };
        let mut out = Vec::new();
        for a in c.objects() {
            let mut row = Vec::new();
            for e in &sets[a.0] {
                let key = format!("{}:{e}", c.obj_name(a));
                let m = table
                    .get(&key)
                    .ok_or_else(|| Error::input(format!("no restriction given for `{key}`")))?;
                row.push(c.mor(m)?);
            }
            out.push(row);
        }
        let given: usize = sets.iter().map(Vec::len).sum();
        if table.len() != given {
            return Err(Error::input(
                "restriction keys must be `object:element` for existing elements",
            ));
        }
        Ok(Some(out))
    }

    /// Check presheaf laws and, when restrictions are given and `x` is the
    /// base's restriction structure, the restriction presheaf axioms.
    pub fn check(&self, c: &FinCat, x: Option<&RestrCat>) -> Result<CheckReport> {
        let (sets, act) = self.tables(c)?;
        let mut r = CheckReport::new("presheaf-file");
        let laws = check_presheaf(c, &sets, &act)?;
        let ok = laws.passed();
        r.absorb("presheaf", laws);
        if !ok {
            return Ok(r.finish());
        }
        if let Some(elbar) = self.elbar(c, &sets)? {
            let x = x.ok_or_else(|| Error::input("element restrictions need a base with a `restriction` key"))?;
            let p = Presheaf::new(c, sets, act)?;
            r.absorb("restriction-presheaf", check_restriction_presheaf(x, &p, &elbar)?);
        }
        Ok(r.finish())
    }

    pub fn load(&self, c: &FinCat) -> Result<Presheaf> {
        let (sets, act) = self.tables(c)?;
        Presheaf::new(c, sets, act)
    }

    pub fn load_restriction(&self, x: &RestrCat) -> Result<RestrictionPresheaf> {
        let (sets, act) = self.tables(x.cat())?;
        let elbar = self
            .elbar(x.cat(), &sets)?
            .ok_or_else(|| Error::input("the presheaf file has no `restriction` key"))?;
        RestrictionPresheaf::new(x, Presheaf::new(x.cat(), sets, act)?, elbar)
    }
}

/// A natural map: for each object, pairs `[x, y]` with `alpha(x) = y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub components: BTreeMap<String, Vec<[String; 2]>>,
}

impl MapFile {
    pub fn from_map(c: &FinCat, p: &Presheaf, q: &Presheaf, alpha: &PresheafMap) -> MapFile {
        let components = c
            .objects()
            .map(|a| {
                let rows = (0..p.len(a))
                    .map(|x| {
                        [
                            p.elem_name(a, x).to_string(),
                            q.elem_name(a, alpha.at(a, x)).to_string(),
                        ]
                    })
                    .collect();
                (c.obj_name(a).to_string(), rows)
            })
            .collect();
        MapFile { components }
    }

    pub fn parse(text: &str) -> Result<MapFile> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<MapFile> {
        MapFile::parse(&read_text(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map files always serialize")
    }

    fn table(&self, c: &FinCat, p: &Presheaf, q: &Presheaf) -> Result<Vec<Vec<usize>>> {
        if let Some(extra) = self.components.keys().find(|k| c.obj(k).is_err()) {
            return Err(Error::UnknownObject(extra.clone()));
        }
        let mut out = Vec::new();
        for a in c.objects() {
            let rows = self
                .components
                .get(c.obj_name(a))
                .map(Vec::as_slice)
                .unwrap_or_default();
            let mut comp = vec![None; p.len(a)];
            for [x, y] in rows {
                let xi = p
                    .elem(a, x)
                    .ok_or_else(|| Error::input(format!("`{x}` is not a source element at `{}`", c.obj_name(a))))?;
                let yi = q
                    .elem(a, y)
                    .ok_or_else(|| Error::input(format!("`{y}` is not a target element at `{}`", c.obj_name(a))))?;
                if comp[xi].replace(yi).is_some() {
                    return Err(Error::input(format!("`{x}` is mapped twice")));
                }
            }
            let comp = comp
                .into_iter()
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::input(format!("component at `{}` is incomplete", c.obj_name(a))))?;
            out.push(comp);
        }
        Ok(out)
    }

    pub fn check(&self, c: &FinCat, p: &Presheaf, q: &Presheaf) -> Result<CheckReport> {
        check_presheaf_map(c, p, q, &self.table(c, p, q)?)
    }

    pub fn load(&self, c: &FinCat, p: &Presheaf, q: &Presheaf) -> Result<PresheafMap> {
        PresheafMap::new(c, p, q, self.table(c, p, q)?)
    }
}

/// A named list of presheaf files over one base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub presheaves: Vec<FamilyEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyEntry {
    pub name: String,
    /// Path relative to the family file.
    pub path: PathBuf,
}

impl FamilyFile {
    pub fn read(path: &Path) -> Result<FamilyFile> {
        Ok(serde_json::from_str(&read_text(path)?)?)
    }

    pub fn load(&self, dir: &Path, c: &FinCat) -> Result<Vec<(String, Presheaf)>> {
        self.presheaves
            .iter()
            .map(|e| Ok((e.name.clone(), PresheafFile::read(&dir.join(&e.path))?.load(c)?)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::presheaf::yoneda_map;
    use crate::rpsh::yoneda_r;

    #[test]
    fn category_round_trip() {
        for x in [fixtures::triv3(), fixtures::max5_b(), fixtures::pfin2()] {
            let file = CategoryFile::from_restr(&x);
            let back = CategoryFile::parse(&file.to_json()).unwrap();
            assert_eq!(back, file);
            let loaded = back.load().unwrap();
            assert_eq!(loaded.restr.unwrap(), x);
        }
        let (c, ms) = fixtures::inj2();
        let file = CategoryFile::from_cat(&c).with_msystem(&c, &ms);
        let loaded = CategoryFile::parse(&file.to_json()).unwrap().load().unwrap();
        assert_eq!(loaded.cat, c);
        assert_eq!(loaded.msystem.unwrap(), ms);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut v: serde_json::Value =
            serde_json::from_str(&CategoryFile::from_cat(fixtures::triv3().cat()).to_json()).unwrap();
        v["colour"] = "red".into();
        assert!(CategoryFile::parse(&v.to_string()).is_err());
    }

    #[test]
    fn broken_restriction_is_reported_not_rejected() {
        let x = fixtures::max5_b();
        let mut file = CategoryFile::from_restr(&x);
        file.restriction.as_mut().unwrap().insert("3".into(), "1".into());
        let r = file.check().unwrap();
        assert!(!r.passed());
        assert!(file.load().is_err());
    }

    #[test]
    fn presheaf_and_map_round_trip() {
        let (c, _) = fixtures::inj2();
        let h = c.mor("{1}->{1,2}[1]").unwrap();
        let (ya, yb, map) = yoneda_map(&c, h).unwrap();
        let base = BaseRef::Inline(Box::new(CategoryFile::from_cat(&c)));
        let pa = PresheafFile::from_presheaf(&c, &ya, base.clone());
        let pa = PresheafFile::parse(&pa.to_json()).unwrap();
        assert_eq!(pa.load(&c).unwrap(), ya);
        let pb = PresheafFile::from_presheaf(&c, &yb, base).load(&c).unwrap();
        let mf = MapFile::parse(&MapFile::from_map(&c, &ya, &yb, &map).to_json()).unwrap();
        assert_eq!(mf.load(&c, &ya, &pb).unwrap(), map);
        assert!(mf.check(&c, &ya, &pb).unwrap().passed());
    }

    #[test]
    fn restriction_presheaf_round_trip() {
        let x = fixtures::pfin2();
        for a in x.cat().objects() {
            let q = yoneda_r(&x, a).unwrap();
            let file = PresheafFile::from_restriction_presheaf(&x, &q, BaseRef::Path("pfin2.json".into()));
            let back = PresheafFile::parse(&file.to_json()).unwrap();
            assert_eq!(back, file);
            assert_eq!(back.load_restriction(&x).unwrap(), q);
            assert!(back.check(x.cat(), Some(&x)).unwrap().passed());
        }
    }
}
