//! The stable system `M_PSh` of presheaf maps, `M`-subobjects of
//! representables, and the subobject presheaf `Σ` with its point `τ`.

use std::collections::HashSet;

use serde::Serialize;

use super::{check_presheaf_map, coproduct, enumerate_maps, subfunctors, subpresheaf, yoneda, Presheaf, PresheafMap};
use crate::error::{Error, Result};
use crate::fincat::{FinCat, MorId, ObjId};
use crate::mcat::{canonical_subobject, m_subobjects, pull_back_subobject, subobject_leq, MSystem};
use crate::report::CheckReport;

/// For `y ∈ Q(D)`: the member `m: C → D` and `x ∈ P(C)` that exhibit the
/// pullback of `mu` along `y(D) ⇒ Q`, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MPshChoice {
    pub object: String,
    pub element: String,
    pub m: Option<String>,
    pub x: Option<String>,
    #[serde(skip)]
    pub raw: Option<(MorId, usize)>,
}

#[derive(Debug, Clone)]
pub struct MPshCheck {
    pub report: CheckReport,
    /// One entry per element of `Q`, in element order.
    pub choices: Vec<MPshChoice>,
}

impl MPshCheck {
    pub fn choice(&self, q: &Presheaf, d: ObjId, y: usize) -> Option<(MorId, usize)> {
        let offset: usize = (0..d.0).map(|a| q.len(ObjId(a))).sum();
        self.choices[offset + y].raw
    }
}

/// Whether `(m, x)` makes the square `y(C) → P`, `y(m)`, `mu`, `y(D) → Q` a
/// pullback, tested pointwise: `u ↦ (m∘u, x·u)` must biject `hom(X, C)` onto
/// `{(h, z) : y·h = mu(z)}` at every object `X`.
fn square_is_pullback(c: &FinCat, p: &Presheaf, q: &Presheaf, mu: &PresheafMap, y: usize, m: MorId, x: usize) -> bool {
    let (cc, d) = (c.dom(m), c.cod(m));
    c.objects().all(|xo| {
        let mut seen = HashSet::new();
        for &u in c.hom(xo, cc) {
            if !seen.insert((c.compose(m, u), p.act(u, x))) {
                return false;
            }
        }
        let fibre: usize = c
            .hom(xo, d)
            .iter()
            .map(|&h| {
                let t = q.act(h, y);
                (0..p.len(xo)).filter(|&z| mu.at(xo, z) == t).count()
            })
            .sum();
        fibre == seen.len()
    })
}

/// The least `x ∈ P(dom m)` making the square at `(y, m)` a pullback.
pub fn pullback_witness(c: &FinCat, p: &Presheaf, q: &Presheaf, mu: &PresheafMap, y: usize, m: MorId) -> Option<usize> {
    let target = q.act(m, y);
    let cc = c.dom(m);
    (0..p.len(cc))
        .filter(|&x| mu.at(cc, x) == target)
        .find(|&x| square_is_pullback(c, p, q, mu, y, m, x))
}

/// Whether `mu: P ⇒ Q` lies in `M_PSh`: for every `y ∈ Q(D)` some member
/// into `D` pulls back along `y`. The recorded member is the identity when
/// it works, else the least working member by id.
pub fn is_mpsh_map(c: &FinCat, ms: &MSystem, p: &Presheaf, q: &Presheaf, mu: &PresheafMap) -> Result<MPshCheck> {
    let nat = check_presheaf_map(c, p, q, mu.components())?;
    if !nat.passed() {
        return Err(Error::input("the presheaf map is not natural"));
    }
    let mut r = CheckReport::new("mpsh-map");
    let mut choices = Vec::new();
    for (d, y) in q.elements() {
        let raw = std::iter::once(c.id(d))
            .chain(ms.into_obj(c, d).filter(|&m| m != c.id(d)))
            .find_map(|m| pullback_witness(c, p, q, mu, y, m).map(|x| (m, x)));
        r.expect("pullback-square", raw.is_some(), || {
            vec![
                ("object", c.obj_name(d).to_string()),
                ("element", q.elem_name(d, y).to_string()),
            ]
        });
        choices.push(MPshChoice {
            object: c.obj_name(d).to_string(),
            element: q.elem_name(d, y).to_string(),
            m: raw.map(|(m, _)| c.mor_name(m).to_string()),
            x: raw.map(|(m, x)| p.elem_name(c.dom(m), x).to_string()),
            raw,
        });
    }
    Ok(MPshCheck {
        report: r.finish(),
        choices,
    })
}

/// The sieve `{m∘u}` on `y(cod m)` generated by `m`.
fn sieve_of(c: &FinCat, m: MorId) -> Vec<Vec<bool>> {
    let d = c.cod(m);
    c.objects()
        .map(|x| {
            c.hom(x, d)
                .iter()
                .map(|&h| c.hom(x, c.dom(m)).iter().any(|&u| c.compose(m, u) == h))
                .collect()
        })
        .collect()
}

fn mask_leq(a: &[Vec<bool>], b: &[Vec<bool>]) -> bool {
    a.iter()
        .zip(b)
        .all(|(ra, rb)| ra.iter().zip(rb).all(|(&x, &y)| !x || y))
}

/// Compare `M_PSh`-subobjects of `y(A)` with `M`-subobjects of `A` via
/// `m ↦ y(m)` and its inverse (pull back along the identity element).
pub fn msub_rep_iso_check(c: &FinCat, ms: &MSystem, a: ObjId) -> Result<CheckReport> {
    let ya = yoneda(c, a)?;
    let mut r = CheckReport::new("msub-rep");
    let name = |f: MorId| c.mor_name(f).to_string();

    // Left side: subfunctors whose inclusion is in M_PSh, with the recovered
    // subobject of A.
    let mut left: Vec<(Vec<Vec<bool>>, MorId)> = Vec::new();
    for mask in subfunctors(c, &ya) {
        let (s, incl) = subpresheaf(c, &ya, &mask)?;
        let check = is_mpsh_map(c, ms, &s, &ya, &incl)?;
        r.tick("subfunctor");
        if !check.report.passed() {
            continue;
        }
        let (m, _) = check
            .choice(&ya, a, super::yoneda_index(c, c.id(a)))
            .ok_or_else(|| Error::internal("passing M_PSh map without a choice at the identity"))?;
        left.push((mask, canonical_subobject(c, m)));
    }
    let right = m_subobjects(c, ms, a)?;

    r.expect("same-size", left.len() == right.len(), || {
        vec![
            ("object", c.obj_name(a).to_string()),
            ("left", left.len().to_string()),
            ("right", right.len().to_string()),
        ]
    });
    for &m in &right {
        let sieve = sieve_of(c, m);
        let hit = left.iter().find(|(mask, _)| *mask == sieve);
        r.expect("forward-lands-in-mpsh", hit.is_some(), || vec![("m", name(m))]);
        if let Some((_, back)) = hit {
            r.expect("inverse-after-forward", *back == m, || {
                vec![("m", name(m)), ("back", name(*back))]
            });
        }
    }
    for (mask, m) in &left {
        r.expect("forward-after-inverse", sieve_of(c, *m) == *mask, || {
            vec![("m", name(*m))]
        });
    }
    for &m in &right {
        for &n in &right {
            let sub = subobject_leq(c, m, n);
            let sieve = mask_leq(&sieve_of(c, m), &sieve_of(c, n));
            r.expect("order", sub == sieve, || vec![("m", name(m)), ("n", name(n))]);
        }
    }
    Ok(r.finish())
}

/// `Σ(C) = Sub_M(C)` acting by pullback, with `τ: 1 ⇒ Σ` at the top
/// subobject.
#[derive(Debug, Clone)]
pub struct Classifier {
    pub sigma: Presheaf,
    pub terminal: Presheaf,
    pub tau: PresheafMap,
    /// Canonical subobject representatives, per object, in element order.
    pub subobjects: Vec<Vec<MorId>>,
}

impl Classifier {
    pub fn new(c: &FinCat, ms: &MSystem) -> Result<Classifier> {
        let subobjects: Vec<Vec<MorId>> = c.objects().map(|a| m_subobjects(c, ms, a)).collect::<Result<_>>()?;
        let sets = subobjects
            .iter()
            .map(|subs| subs.iter().map(|&m| c.mor_name(m).to_string()).collect())
            .collect();
        let mut failure = None;
        let sigma = Presheaf::from_fn(c, sets, |f, x| {
            let m = subobjects[c.cod(f).0][x];
            match pull_back_subobject(c, f, m) {
                Ok(pb) => subobjects[c.dom(f).0].iter().position(|&s| s == pb).unwrap_or(0),
                Err(e) => {
                    failure = Some(e);
                    0
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let sigma = sigma?;
        let terminal = Presheaf::terminal(c);
        let tau = PresheafMap::from_fn(c, &terminal, &sigma, |a, _| {
            let top = canonical_subobject(c, c.id(a));
            subobjects[a.0]
                .iter()
                .position(|&s| s == top)
                .expect("the identity is a member")
        })?;
        Ok(Classifier {
            sigma,
            terminal,
            tau,
            subobjects,
        })
    }

    fn top(&self, a: ObjId) -> usize {
        self.tau.at(a, 0)
    }

    /// The characteristic map of an `M_PSh` inclusion `mu: P ⇒ Q`:
    /// `y ↦` the subobject chosen by [`is_mpsh_map`].
    pub fn characteristic(&self, c: &FinCat, q: &Presheaf, check: &MPshCheck) -> Result<PresheafMap> {
        PresheafMap::from_fn(c, q, &self.sigma, |d, y| {
            let (m, _) = check.choice(q, d, y).expect("checked map has a choice everywhere");
            let m = canonical_subobject(c, m);
            self.subobjects[d.0]
                .iter()
                .position(|&s| s == m)
                .expect("canonical subobject")
        })
        .map_err(|e| Error::internal(format!("characteristic map is not natural: {e}")))
    }

    /// Whether pulling `τ` back along `chi` gives exactly the image of `mu`.
    fn reconstructs(&self, q: &Presheaf, image: &[Vec<bool>], chi: &PresheafMap) -> bool {
        image.iter().enumerate().all(|(a, row)| {
            let a = ObjId(a);
            (0..q.len(a)).all(|y| row[y] == (chi.at(a, y) == self.top(a)))
        })
    }
}

/// Classify the `M_PSh` inclusion `mu: P ⇒ Q`: the characteristic map must
/// reconstruct `mu` by pullback of `τ`, and be the only map `Q ⇒ Σ` that
/// does.
pub fn classify(
    c: &FinCat,
    ms: &MSystem,
    cls: &Classifier,
    p: &Presheaf,
    q: &Presheaf,
    mu: &PresheafMap,
) -> Result<CheckReport> {
    let mut r = CheckReport::new("classify");
    let check = is_mpsh_map(c, ms, p, q, mu)?;
    if !check.report.passed() || !mu.is_injective() {
        r.skip("not-an-mpsh-inclusion", Vec::<(String, String)>::new());
        return Ok(r.finish());
    }
    let chi = cls.characteristic(c, q, &check)?;
    let image = mu.image(q);
    r.expect(
        "reconstructs",
        cls.reconstructs(q, &image, &chi),
        Vec::<(String, String)>::new,
    );
    let rivals: Vec<PresheafMap> = enumerate_maps(c, q, &cls.sigma)
        .into_iter()
        .filter(|alt| cls.reconstructs(q, &image, alt))
        .collect();
    r.expect("unique", rivals.len() == 1 && rivals[0] == chi, || {
        vec![("classifying-maps", rivals.len().to_string())]
    });
    Ok(r.finish())
}

/// Build `Σ` and `τ` and check that `τ ∈ M_PSh` and that every `M_PSh`
/// inclusion into a representable or a binary coproduct of representables
/// has a unique characteristic map.
pub fn sigma_classifier(c: &FinCat, ms: &MSystem) -> Result<(Classifier, CheckReport)> {
    let cls = Classifier::new(c, ms)?;
    let mut r = CheckReport::new("classifier");
    let tau = is_mpsh_map(c, ms, &cls.terminal, &cls.sigma, &cls.tau)?;
    r.absorb("tau", tau.report);

    let reps: Vec<Presheaf> = c.objects().map(|a| yoneda(c, a)).collect::<Result<_>>()?;
    let mut targets: Vec<(String, Presheaf)> = c
        .objects()
        .map(|a| (format!("y({})", c.obj_name(a)), reps[a.0].clone()))
        .collect();
    for a in c.objects() {
        for b in c.objects().filter(|&b| b >= a) {
            let name = format!("y({})+y({})", c.obj_name(a), c.obj_name(b));
            targets.push((name, coproduct(c, &[&reps[a.0], &reps[b.0]]).0));
        }
    }
    for (name, q) in &targets {
        for mask in subfunctors(c, q) {
            let (s, incl) = subpresheaf(c, q, &mask)?;
            if !is_mpsh_map(c, ms, &s, q, &incl)?.report.passed() {
                continue;
            }
            let one = classify(c, ms, &cls, &s, q, &incl)?;
            for v in one.violations {
                let mut w = v.witness;
                w.insert("target".into(), name.clone());
                w.insert("subpresheaf".into(), describe_mask(c, q, &mask));
                r.violation(&v.law, w);
            }
            for (law, n) in one.checked {
                *r.checked.entry(law).or_insert(0) += n;
            }
        }
    }
    Ok((cls, r.finish()))
}

fn describe_mask(c: &FinCat, q: &Presheaf, mask: &[Vec<bool>]) -> String {
    let parts: Vec<String> = c
        .objects()
        .map(|a| {
            let elems: Vec<&str> = (0..q.len(a))
                .filter(|&y| mask[a.0][y])
                .map(|y| q.elem_name(a, y))
                .collect();
            format!("{}:[{}]", c.obj_name(a), elems.join(","))
        })
        .collect();
    parts.join(" ")
}
