//! The functors `F: PSh(C) → PSh_r(Par C)` and `G` back, with unit `η` and
//! counit `ε`; transport of restriction presheaves along `Kr`; and the
//! comparison of `y_r` with the composite through `Kr`, `Φ` and `F`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{FinCat, Functor, MorId, ObjId};
use crate::mcat::{phi, MSystem, Par};
use crate::presheaf::{
    generated_family as psh_family, is_mpsh_map, pullback_witness, subfunctors, subpresheaf, yoneda, yoneda_index,
    Presheaf, PresheafMap,
};
use crate::report::CheckReport;
use crate::restriction::{check_restriction_functor, RestrCat};
use crate::rpsh::{generated_family, preserves_restriction, restriction_of_nat, yoneda_r, RestrictionPresheaf};
use crate::splitting::{kr, KrCat};

/// `F(P)` with, per object `X`, its canonical classes `(m, f)`.
#[derive(Debug, Clone)]
pub struct FPresheaf {
    pub rp: RestrictionPresheaf,
    pub classes: Vec<Vec<(MorId, usize)>>,
}

impl FPresheaf {
    fn index(&self, x: ObjId, class: (MorId, usize)) -> Result<usize> {
        self.classes[x.0]
            .iter()
            .position(|&k| k == class)
            .ok_or_else(|| Error::internal("class outside F(P)"))
    }
}

/// Least `(apex, m∘φ, f·φ)` over isomorphisms `φ` into `dom m`.
fn canonical_pair(c: &FinCat, p: &Presheaf, m: MorId, f: usize) -> (MorId, usize) {
    let y = c.dom(m);
    c.objects()
        .flat_map(|z| c.isos(z, y))
        .map(|phi| (c.dom(phi), c.compose(m, phi), p.act(phi, f)))
        .min()
        .map(|(_, m, f)| (m, f))
        .expect("identity is an iso")
}

/// `(FP)(X)`: classes of `(m: Y → X ∈ M, f ∈ PY)`; a partial map `(n, g)`
/// acts by `(m, f) ↦ (n∘m', f·g')` for the pullback `g∘m' = m∘g'`.
pub fn functor_f(par: &Par, p: &Presheaf) -> Result<FPresheaf> {
    let c = par.base();
    let ms = par.msystem();
    let mut classes: Vec<Vec<(MorId, usize)>> = Vec::new();
    for x in c.objects() {
        let mut set: Vec<(ObjId, MorId, usize)> = ms
            .into_obj(c, x)
            .flat_map(|m| (0..p.len(c.dom(m))).map(move |f| (m, f)))
            .map(|(m, f)| canonical_pair(c, p, m, f))
            .map(|(m, f)| (c.dom(m), m, f))
            .collect();
        set.sort();
        set.dedup();
        classes.push(set.into_iter().map(|(_, m, f)| (m, f)).collect());
    }
    let sets = classes
        .iter()
        .map(|row| {
            row.iter()
                .map(|&(m, f)| format!("{}|{}", c.mor_name(m), p.elem_name(c.dom(m), f)))
                .collect()
        })
        .collect();
    let pc = par.cat();
    let mut failure = None;
    let psh = Presheaf::from_fn(pc, sets, |k, i| {
        let (m, f) = classes[pc.cod(k).0][i];
        let s = par.span(k);
        let image = match c.pullback(s.f, m) {
            Ok(Some(sq)) => canonical_pair(c, p, c.compose(s.m, sq.p), p.act(sq.q, f)),
            _ => {
                failure = Some(Error::internal("a member has no pullback"));
                return 0;
            }
        };
        classes[pc.dom(k).0]
            .iter()
            .position(|&cl| cl == image)
            .unwrap_or_else(|| {
                failure = Some(Error::internal("action leaves F(P)"));
                0
            })
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let psh = psh?;
    let elbar = classes
        .iter()
        .map(|row| row.iter().map(|&(m, _)| par.class_of(m, m)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let rp = RestrictionPresheaf::new(par.restr(), psh, elbar)?;
    Ok(FPresheaf { rp, classes })
}

/// `(Fα)_X(m, f) = (m, α(f))`.
pub fn functor_f_on_maps(
    par: &Par,
    p: &Presheaf,
    fp: &FPresheaf,
    q: &Presheaf,
    fq: &FPresheaf,
    alpha: &PresheafMap,
) -> Result<PresheafMap> {
    let c = par.base();
    let mut failure = None;
    let out = PresheafMap::from_fn(par.cat(), fp.rp.psh(), fq.rp.psh(), |x, i| {
        let (m, f) = fp.classes[x.0][i];
        let image = canonical_pair(c, q, m, alpha.at(c.dom(m), f));
        fq.index(x, image).unwrap_or_else(|e| {
            failure = Some(e);
            0
        })
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let _ = p;
    out.map_err(|e| Error::internal(format!("F(α) is not natural: {e}")))
}

/// `(GR)(X) = {x ∈ RX : x̄ = (1,1)}` acting through total maps `(1, f)`.
#[derive(Debug, Clone)]
pub struct GPresheaf {
    pub psh: Presheaf,
    /// Per object, the indices in `R` of the kept elements.
    pub elems: Vec<Vec<usize>>,
}

pub fn functor_g(par: &Par, r: &RestrictionPresheaf) -> Result<GPresheaf> {
    let c = par.base();
    let pc = par.cat();
    let elems: Vec<Vec<usize>> = c
        .objects()
        .map(|x| (0..r.psh().len(x)).filter(|&i| r.elbar(x, i) == pc.id(x)).collect())
        .collect();
    let sets = c
        .objects()
        .map(|x| {
            elems[x.0]
                .iter()
                .map(|&i| r.psh().elem_name(x, i).to_string())
                .collect()
        })
        .collect();
    let mut failure = None;
    let psh = Presheaf::from_fn(c, sets, |f, i| {
        let y = r.psh().act(par.total(f), elems[c.cod(f).0][i]);
        elems[c.dom(f).0].iter().position(|&k| k == y).unwrap_or_else(|| {
            failure = Some(Error::internal("a total map moved a total element out of G"));
            0
        })
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(GPresheaf { psh: psh?, elems })
}

/// `G` on a restriction-preserving map.
pub fn functor_g_on_maps(par: &Par, gr: &GPresheaf, gs: &GPresheaf, alpha: &PresheafMap) -> Result<PresheafMap> {
    let c = par.base();
    let mut failure = None;
    let out = PresheafMap::from_fn(c, &gr.psh, &gs.psh, |x, i| {
        let y = alpha.at(x, gr.elems[x.0][i]);
        gs.elems[x.0].iter().position(|&k| k == y).unwrap_or_else(|| {
            failure = Some(Error::precondition("G applies to total maps only"));
            0
        })
    });
    if let Some(e) = failure {
        return Err(e);
    }
    out.map_err(|e| Error::internal(format!("G(α) is not natural: {e}")))
}

/// One presheaf's unit and counit tables, keyed by object name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentTable {
    pub presheaf: String,
    pub map: String,
    pub components: BTreeMap<String, Vec<(String, String)>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivWitness {
    pub report: CheckReport,
    pub tables: Vec<ComponentTable>,
}

fn table(c: &FinCat, name: &str, map: &str, p: &Presheaf, q: &Presheaf, alpha: &PresheafMap) -> ComponentTable {
    let components = c
        .objects()
        .map(|x| {
            let rows = (0..p.len(x))
                .map(|i| {
                    (
                        p.elem_name(x, i).to_string(),
                        q.elem_name(x, alpha.at(x, i)).to_string(),
                    )
                })
                .collect();
            (c.obj_name(x).to_string(), rows)
        })
        .collect();
    ComponentTable {
        presheaf: name.to_string(),
        map: map.to_string(),
        components,
    }
}

/// `(η_P)_X(f) = (1, f)`.
fn eta(par: &Par, p: &Presheaf, fp: &FPresheaf, gfp: &GPresheaf) -> Result<PresheafMap> {
    let c = par.base();
    let mut failure = None;
    let out = PresheafMap::from_fn(c, p, &gfp.psh, |x, f| {
        let class = canonical_pair(c, p, c.id(x), f);
        let found = fp.index(x, class).and_then(|i| {
            gfp.elems[x.0]
                .iter()
                .position(|&k| k == i)
                .ok_or_else(|| Error::internal("(1, f) is not total"))
        });
        found.unwrap_or_else(|e| {
            failure = Some(e);
            0
        })
    });
    if let Some(e) = failure {
        return Err(e);
    }
    out.map_err(|e| Error::internal(format!("η is not natural: {e}")))
}

/// `(ε_Q)_X(m, f) = f·(m, 1)` and its inverse `x ↦ (n, x·(1, n))` where
/// `x̄ = (n, n)`.
fn epsilon(par: &Par, q: &RestrictionPresheaf, gq: &GPresheaf, fgq: &FPresheaf) -> Result<(PresheafMap, PresheafMap)> {
    let c = par.base();
    let pc = par.cat();
    let mut failure = None;
    let forward = PresheafMap::from_fn(pc, fgq.rp.psh(), q.psh(), |x, i| {
        let (m, f) = fgq.classes[x.0][i];
        let u = gq.elems[c.dom(m).0][f];
        match par.partial_inverse(m) {
            Ok(k) => q.psh().act(k, u),
            Err(e) => {
                failure = Some(e);
                0
            }
        }
    });
    let backward = PresheafMap::from_fn(pc, q.psh(), fgq.rp.psh(), |x, i| {
        let n = par.span(q.elbar(x, i)).m;
        let y = q.psh().act(par.total(n), i);
        let found = gq.elems[c.dom(n).0]
            .iter()
            .position(|&k| k == y)
            .ok_or_else(|| Error::internal("x·(1,n) is not total"))
            .and_then(|g| fgq.index(x, canonical_pair(c, &gq.psh, n, g)));
        found.unwrap_or_else(|e| {
            failure = Some(e);
            0
        })
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let forward = forward.map_err(|e| Error::internal(format!("ε is not natural: {e}")))?;
    let backward = backward.map_err(|e| Error::internal(format!("ε⁻¹ is not natural: {e}")))?;
    Ok((forward, backward))
}

fn check_counit(
    par: &Par,
    name: &str,
    q: &RestrictionPresheaf,
    r: &mut CheckReport,
    tables: &mut Vec<ComponentTable>,
) -> Result<()> {
    let pc = par.cat();
    let gq = functor_g(par, q)?;
    let fgq = functor_f(par, &gq.psh)?;
    let (eps, inv) = epsilon(par, q, &gq, &fgq)?;
    let w = || vec![("presheaf", name.to_string())];
    r.expect("epsilon-bijective", eps.is_bijective(q.psh()), w);
    r.expect(
        "epsilon-inverse",
        eps.then(&inv) == PresheafMap::identity(fgq.rp.psh()),
        w,
    );
    r.expect("epsilon-inverse", inv.then(&eps) == PresheafMap::identity(q.psh()), w);
    r.expect("epsilon-total", preserves_restriction(&fgq.rp, q, &eps), w);
    tables.push(table(pc, name, "epsilon", fgq.rp.psh(), q.psh(), &eps));
    Ok(())
}

/// For an `M_PSh` inclusion `mu: P ⇒ Q`: `Fμ` is a restriction monic, split
/// by `ρ(n, g) = (n∘m_g, x_g)` with `Fμ∘ρ` the idempotent
/// `α(n, g) = (n∘m_g, g·m_g)`; and `G` maps it back into `M_PSh`, with each
/// member read off `bar(ρ(θ)) = (m, m)`.
fn check_monic_transport(
    par: &Par,
    name: &str,
    p: &Presheaf,
    q: &Presheaf,
    mu: &PresheafMap,
    r: &mut CheckReport,
) -> Result<()> {
    let c = par.base();
    let pc = par.cat();
    let ms = par.msystem();
    let check = is_mpsh_map(c, ms, p, q, mu)?;
    if !check.report.passed() {
        return Ok(());
    }
    let fp = functor_f(par, p)?;
    let fq = functor_f(par, q)?;
    let fmu = functor_f_on_maps(par, p, &fp, q, &fq, mu)?;
    let mut failure = None;
    let mut split = |x: ObjId, i: usize, into_p: bool| -> usize {
        let (n, g) = fq.classes[x.0][i];
        let (mg, xg) = check.choice(q, c.dom(n), g).expect("checked map");
        let nm = c.compose(n, mg);
        let found = if into_p {
            fp.index(x, canonical_pair(c, p, nm, xg))
        } else {
            fq.index(x, canonical_pair(c, q, nm, q.act(mg, g)))
        };
        found.unwrap_or_else(|e| {
            failure = Some(e);
            0
        })
    };
    let rho = PresheafMap::from_fn(pc, fq.rp.psh(), fp.rp.psh(), |x, i| split(x, i, true));
    let alpha = PresheafMap::from_fn(pc, fq.rp.psh(), fq.rp.psh(), |x, i| split(x, i, false));
    if let Some(e) = failure {
        return Err(e);
    }
    let w = || vec![("inclusion", name.to_string())];
    let (rho, alpha) = match (rho, alpha) {
        (Ok(rho), Ok(alpha)) => (rho, alpha),
        _ => {
            r.expect("retraction-natural", false, w);
            return Ok(());
        }
    };
    r.expect("retraction", fmu.then(&rho) == PresheafMap::identity(fp.rp.psh()), w);
    r.expect("section-then-retraction", rho.then(&fmu) == alpha, w);
    r.expect(
        "restriction-monic",
        restriction_of_nat(par.restr(), &fq.rp, &fp.rp, &rho)? == alpha,
        w,
    );
    r.expect("equalizes", fmu.then(&alpha) == fmu, w);

    // G(Fμ) lies in M_PSh with members from bar(ρ(θ)).
    let gfp = functor_g(par, &fp.rp)?;
    let gfq = functor_g(par, &fq.rp)?;
    let gfmu = functor_g_on_maps(par, &gfp, &gfq, &fmu)?;
    r.expect(
        "g-lands-in-mpsh",
        is_mpsh_map(c, ms, &gfp.psh, &gfq.psh, &gfmu)?.report.passed(),
        w,
    );
    for (x, t) in gfq.psh.elements() {
        let theta = gfq.elems[x.0][t];
        let m = par.span(fp.rp.elbar(x, rho.at(x, theta))).m;
        let ok = pullback_witness(c, &gfp.psh, &gfq.psh, &gfmu, t, m).is_some();
        r.expect("g-member-from-restriction", ok, || {
            vec![
                ("inclusion", name.to_string()),
                ("element", gfq.psh.elem_name(x, t).to_string()),
            ]
        });
    }
    Ok(())
}

/// The default family: representables, binary coproducts of representables,
/// and `M_PSh` subpresheaves of representables.
pub fn default_family(c: &FinCat, ms: &MSystem) -> Result<Vec<(String, Presheaf)>> {
    let mut out = psh_family(c, 2)?;
    for a in c.objects() {
        let ya = yoneda(c, a)?;
        for (k, mask) in subfunctors(c, &ya).into_iter().enumerate() {
            let (s, incl) = subpresheaf(c, &ya, &mask)?;
            if s.total_len() < ya.total_len() && is_mpsh_map(c, ms, &s, &ya, &incl)?.report.passed() {
                out.push((format!("sub{k}(y({}))", c.obj_name(a)), s));
            }
        }
    }
    Ok(out)
}

/// Certify the equivalence on `family`: `η_P` and `ε` are natural
/// bijections, `ε` is total, the triangle `ε_FP ∘ Fη_P = 1` holds,
/// `F(yA) ≅ y_r(A)`, `G(y_r A) ≅ yA`, and `M_PSh` inclusions of subpresheaves
/// of representables go to restriction monics and back. The counit is also
/// checked on the generated restriction presheaves of `Par(C)`.
pub fn verify_equivalence(par: &Par, family: &[(String, Presheaf)]) -> Result<EquivWitness> {
    let c = par.base();
    let pc = par.cat();
    let x = par.restr();
    let mut r = CheckReport::new("equivalence");
    let mut tables = Vec::new();

    for (name, p) in family {
        let fp = functor_f(par, p)?;
        let gfp = functor_g(par, &fp.rp)?;
        let eta_p = eta(par, p, &fp, &gfp)?;
        r.expect("eta-bijective", eta_p.is_bijective(&gfp.psh), || {
            vec![("presheaf", name.clone())]
        });
        tables.push(table(c, name, "eta", p, &gfp.psh, &eta_p));

        let fgfp = functor_f(par, &gfp.psh)?;
        let f_eta = functor_f_on_maps(par, p, &fp, &gfp.psh, &fgfp, &eta_p)?;
        r.expect("F-eta-total", preserves_restriction(&fp.rp, &fgfp.rp, &f_eta), || {
            vec![("presheaf", name.clone())]
        });
        let (eps_fp, _) = epsilon(par, &fp.rp, &gfp, &fgfp)?;
        r.expect(
            "triangle",
            f_eta.then(&eps_fp) == PresheafMap::identity(fp.rp.psh()),
            || vec![("presheaf", name.clone())],
        );
        check_counit(par, &format!("F({name})"), &fp.rp, &mut r, &mut tables)?;
    }

    for a in c.objects() {
        let an = c.obj_name(a).to_string();
        let ya = yoneda(c, a)?;
        let fya = functor_f(par, &ya)?;
        let yra = yoneda_r(x, a)?;
        let iso = PresheafMap::from_fn(pc, fya.rp.psh(), yra.psh(), |xo, i| {
            let (m, f) = fya.classes[xo.0][i];
            let k = par.class_of(m, c.hom(c.dom(m), a)[f]).expect("member leg");
            yoneda_index(pc, k)
        });
        match iso {
            Ok(iso) => {
                r.expect("F-y-iso", iso.is_bijective(yra.psh()), || vec![("object", an.clone())]);
                r.expect("F-y-iso-total", preserves_restriction(&fya.rp, &yra, &iso), || {
                    vec![("object", an.clone())]
                });
            }
            Err(_) => r.expect("F-y-iso", false, || vec![("object", an.clone())]),
        }

        let gyra = functor_g(par, &yra)?;
        let iso = PresheafMap::from_fn(c, &gyra.psh, &ya, |xo, i| {
            let k = pc.hom(xo, a)[gyra.elems[xo.0][i]];
            let s = par.span(k);
            let inv = c.inverse(s.m).expect("total class has an invertible leg");
            yoneda_index(c, c.compose(s.f, inv))
        });
        let ok = iso.map(|iso| iso.is_bijective(&ya)).unwrap_or(false);
        r.expect("G-y-iso", ok, || vec![("object", an.clone())]);
        check_counit(par, &format!("y_r({an})"), &yra, &mut r, &mut tables)?;
    }

    // The representables were handled above; the rest are `Q(A, e)` splittings.
    for (name, q) in generated_family(x)?.into_iter().skip(pc.num_objects()) {
        check_counit(par, &name, &q, &mut r, &mut tables)?;
    }

    for a in c.objects() {
        let ya = yoneda(c, a)?;
        for (k, mask) in subfunctors(c, &ya).into_iter().enumerate() {
            let (s, incl) = subpresheaf(c, &ya, &mask)?;
            check_monic_transport(par, &format!("sub{k}(y({}))", c.obj_name(a)), &s, &ya, &incl, &mut r)?;
        }
    }
    Ok(EquivWitness {
        report: r.finish(),
        tables,
    })
}

/// `Q′(A, e) = {x ∈ QA : x·e = x}` on `Kr(X)`, acting and restricting as `Q`.
pub fn kr_psh_transport(x: &RestrCat, k: &KrCat, q: &RestrictionPresheaf) -> Result<RestrictionPresheaf> {
    let kc = k.result.cat();
    let keep: Vec<Vec<usize>> = k
        .pairs
        .iter()
        .map(|&(a, e)| (0..q.psh().len(a)).filter(|&i| q.psh().act(e, i) == i).collect())
        .collect();
    let sets = k
        .pairs
        .iter()
        .enumerate()
        .map(|(o, &(a, _))| keep[o].iter().map(|&i| q.psh().elem_name(a, i).to_string()).collect())
        .collect();
    let psh = Presheaf::from_fn(kc, sets, |f, i| {
        let (src, dst) = (kc.dom(f), kc.cod(f));
        let y = q.psh().act(k.underlying[f.0], keep[dst.0][i]);
        keep[src.0].iter().position(|&j| j == y).unwrap_or(usize::MAX)
    })
    .map_err(|e| Error::internal(format!("transported presheaf is ill-formed: {e}")))?;
    let mut elbar = Vec::with_capacity(kc.num_objects());
    for (o, &(a, _)) in k.pairs.iter().enumerate() {
        let mut row = Vec::new();
        for &i in &keep[o] {
            let e = q.elbar(a, i);
            let m = k
                .morphism(ObjId(o), e, ObjId(o))
                .ok_or_else(|| Error::internal("element restriction is not a Kr endomorphism"))?;
            row.push(m);
        }
        elbar.push(row);
    }
    let _ = x;
    RestrictionPresheaf::new(&k.result, psh, elbar)
}

/// Restrict a restriction presheaf on `Kr(X)` along `J`.
pub fn restrict_along_j(x: &RestrCat, k: &KrCat, q: &RestrictionPresheaf) -> Result<RestrictionPresheaf> {
    let c = x.cat();
    let sets = c.objects().map(|a| q.psh().set(k.j.obj(a)).to_vec()).collect();
    let psh = Presheaf::from_fn(c, sets, |f, i| q.psh().act(k.j.mor(f), i))?;
    let elbar = c
        .objects()
        .map(|a| {
            (0..psh.len(a))
                .map(|i| k.underlying[q.elbar(k.j.obj(a), i).0])
                .collect()
        })
        .collect();
    RestrictionPresheaf::new(x, psh, elbar)
}

/// Compare, for every object `A` of `X`, `y_r(A)` with `F(y(ΦJA))` pulled
/// back along `Φ∘J: X → Par(MTotal(Kr X))`, via the iso `f ↦ Φ(Jf)`.
pub fn cockett_lack_check(x: &RestrCat) -> Result<CheckReport> {
    let c = x.cat();
    let mut r = CheckReport::new("cockett-lack");
    let k = kr(x)?;
    r.absorb("J", check_restriction_functor(&k.j, x, &k.result)?);
    let (mt, par, phi_f) = phi(&k.result)?;
    r.absorb("Phi", check_restriction_functor(&phi_f, &k.result, par.restr())?);
    let l: Functor = k.j.then(&phi_f);
    let pc = par.cat();
    let base = &mt.cat;

    // Preimage of a Par endomorphism under the fully faithful L.
    let preimage = |b: ObjId, g: MorId| -> Result<MorId> {
        c.hom(b, b)
            .iter()
            .copied()
            .find(|&h| l.mor(h) == g)
            .ok_or_else(|| Error::internal("Φ∘J is not full on a restriction"))
    };

    let mut isos = Vec::new();
    let mut transported = Vec::new();
    for a in c.objects() {
        let an = c.obj_name(a).to_string();
        let fy = functor_f(&par, &yoneda(base, l.obj(a))?)?;
        let sets = c.objects().map(|b| fy.rp.psh().set(l.obj(b)).to_vec()).collect();
        let psh = Presheaf::from_fn(c, sets, |f, i| fy.rp.psh().act(l.mor(f), i))?;
        let elbar = c
            .objects()
            .map(|b| {
                (0..psh.len(b))
                    .map(|i| preimage(b, fy.rp.elbar(l.obj(b), i)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let t = RestrictionPresheaf::new(x, psh, elbar)?;
        let yra = yoneda_r(x, a)?;
        let class_index = |b: ObjId, k: MorId| -> Result<usize> {
            let s = par.span(k);
            fy.index(l.obj(b), (s.m, yoneda_index(base, s.f)))
        };
        let mut failure = None;
        let iso = PresheafMap::from_fn(c, yra.psh(), t.psh(), |b, i| {
            class_index(b, l.mor(c.hom(b, a)[i])).unwrap_or_else(|e| {
                failure = Some(e);
                0
            })
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let w = || vec![("object", an.clone())];
        match iso {
            Ok(iso) => {
                r.expect("iso-bijective", iso.is_bijective(t.psh()), w);
                r.expect("iso-total", preserves_restriction(&yra, &t, &iso), w);
                isos.push(Some(iso));
            }
            Err(_) => {
                r.expect("iso-natural", false, w);
                isos.push(None);
            }
        }
        transported.push((fy, t));
    }

    // Naturality in A: postcomposition with h agrees on both sides.
    for h in c.morphisms() {
        let (a, a2) = (c.dom(h), c.cod(h));
        let (Some(iso_a), Some(iso_a2)) = (&isos[a.0], &isos[a2.0]) else {
            continue;
        };
        let (fy_a, _) = &transported[a.0];
        let (fy_a2, _) = &transported[a2.0];
        // iso_{A'}(h∘g) against the class of Φ(J h) ∘ iso_A(g).
        let holds = c.objects().all(|b| {
            c.hom(b, a).iter().enumerate().all(|(o, &g)| {
                let (m, f) = fy_a.classes[l.obj(b).0][iso_a.at(b, o)];
                let Ok(kmor) = par.class_of(m, base.hom(base.dom(m), l.obj(a))[f]) else {
                    return false;
                };
                let s = par.span(pc.compose(l.mor(h), kmor));
                let moved = fy_a2.index(l.obj(b), (s.m, yoneda_index(base, s.f)));
                moved.ok() == Some(iso_a2.at(b, yoneda_index(c, c.compose(h, g))))
            })
        });
        r.expect("natural-in-object", holds, || vec![("h", c.mor_name(h).to_string())]);
    }
    Ok(r.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn f_of_representable_counts() {
        let (inj, ms) = fixtures::inj2();
        let par = Par::new(&inj, &ms).unwrap();
        let y = yoneda(&inj, inj.obj("{1,2}").unwrap()).unwrap();
        let fy = functor_f(&par, &y).unwrap();
        assert_eq!(fy.rp.psh().len(inj.obj("{1}").unwrap()), 3);
        let g = functor_g(&par, &fy.rp).unwrap();
        assert_eq!(g.psh.len(inj.obj("{1}").unwrap()), 2);
    }

    #[test]
    fn trivial_m_system_gives_identity_like_f() {
        let t = fixtures::triv3();
        let isos = MSystem::isos(t.cat());
        let par = Par::new(t.cat(), &isos).unwrap();
        for a in t.cat().objects() {
            let y = yoneda(t.cat(), a).unwrap();
            let fy = functor_f(&par, &y).unwrap();
            for b in t.cat().objects() {
                assert_eq!(fy.rp.psh().len(b), y.len(b));
            }
        }
    }

    #[test]
    fn equivalence_on_inj2_representables() {
        let (inj, ms) = fixtures::inj2();
        let par = Par::new(&inj, &ms).unwrap();
        let fam = psh_family(&inj, 1).unwrap();
        let w = verify_equivalence(&par, &fam).unwrap();
        assert!(w.report.passed(), "{}", w.report.to_text());
    }

    #[test]
    fn transport_round_trips() {
        for x in [fixtures::max5_b(), fixtures::triv3()] {
            let k = kr(&x).unwrap();
            for (_, q) in crate::rpsh::generated_family(&x).unwrap() {
                let moved = kr_psh_transport(&x, &k, &q).unwrap();
                assert_eq!(restrict_along_j(&x, &k, &moved).unwrap(), q);
            }
        }
        let b = fixtures::max5_b();
        let k = kr(&b).unwrap();
        let star = b.cat().obj("*").unwrap();
        let moved = kr_psh_transport(&b, &k, &yoneda_r(&b, star).unwrap()).unwrap();
        let three = k.object(star, b.cat().mor("3").unwrap()).unwrap();
        assert_eq!(moved.psh().set(three), ["3", "4", "5"]);
    }

    #[test]
    fn cockett_lack_on_small_fixtures() {
        for x in [fixtures::triv3(), fixtures::max5_b()] {
            let r = cockett_lack_check(&x).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
    }
}
