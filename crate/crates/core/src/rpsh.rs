//! Restriction presheaves: presheaves on a restriction category with a
//! restriction idempotent `x̄` attached to every element.

use crate::error::{Error, Result};
use crate::fincat::{MorId, ObjId};
use crate::presheaf::{check_presheaf_map, enumerate_maps, subpresheaf, yoneda, yoneda_map, Presheaf, PresheafMap};
use crate::report::CheckReport;
use crate::restriction::RestrCat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionPresheaf {
    psh: Presheaf,
    elbar: Vec<Vec<MorId>>,
}

/// Check axioms A1–A3 and the two derived laws for `elbar` on `p`.
///
/// - A1: `x·x̄ = x`
/// - A2: `bar(x·e) = x̄∘e` for restriction idempotents `e`
/// - A3: `x̄∘g = g∘bar(x·g)`
pub fn check_restriction_presheaf(x: &RestrCat, p: &Presheaf, elbar: &[Vec<MorId>]) -> Result<CheckReport> {
    let c = x.cat();
    if elbar.len() != c.num_objects() || c.objects().any(|a| elbar[a.0].len() != p.len(a)) {
        return Err(Error::input("a restriction is required for every element"));
    }
    for (a, xe) in p.elements() {
        let e = elbar[a.0][xe];
        c.check_mor(e)?;
        if c.dom(e) != a || !x.is_restriction_idempotent(e) {
            return Err(Error::input(format!(
                "restriction `{}` of element `{}` is not a restriction idempotent on `{}`",
                c.mor_name(e),
                p.elem_name(a, xe),
                c.obj_name(a)
            )));
        }
    }
    let mut r = CheckReport::new("restriction-presheaf");
    let el = |a: ObjId, xe: usize| p.elem_name(a, xe).to_string();
    for (a, xe) in p.elements() {
        let xbar = elbar[a.0][xe];
        r.expect("A1", p.act(xbar, xe) == xe, || vec![("element", el(a, xe))]);
        for &g in &c.into_obj(a) {
            let b = c.dom(g);
            let xg = p.act(g, xe);
            let xg_bar = elbar[b.0][xg];
            let w = || vec![("element", el(a, xe)), ("g", c.mor_name(g).to_string())];
            if b == a && x.is_restriction_idempotent(g) {
                r.expect("A2", xg_bar == c.compose(xbar, g), w);
            }
            r.expect("A3", c.compose(xbar, g) == c.compose(g, xg_bar), w);
            r.expect("derived/bar-g-absorbs", c.compose(x.bar(g), xg_bar) == xg_bar, w);
            r.expect("derived/bar-of-composite", x.bar(c.compose(xbar, g)) == xg_bar, w);
        }
    }
    Ok(r.finish())
}

impl RestrictionPresheaf {
    pub fn new(x: &RestrCat, psh: Presheaf, elbar: Vec<Vec<MorId>>) -> Result<RestrictionPresheaf> {
        let r = check_restriction_presheaf(x, &psh, &elbar)?;
        if !r.passed() {
            return Err(Error::Laws(Box::new(r)));
        }
        Ok(RestrictionPresheaf { psh, elbar })
    }

    pub fn psh(&self) -> &Presheaf {
        &self.psh
    }

    pub fn elbar(&self, a: ObjId, x: usize) -> MorId {
        self.elbar[a.0][x]
    }

    pub fn elbars(&self) -> &[Vec<MorId>] {
        &self.elbar
    }
}

/// All restriction structures on `p`. At most one exists; finding two is an
/// internal error.
pub fn infer_restriction_structure(x: &RestrCat, p: &Presheaf) -> Result<Vec<Vec<Vec<MorId>>>> {
    let c = x.cat();
    let elems = p.elements();
    let flat = |a: ObjId, xe: usize| elems.iter().position(|&pr| pr == (a, xe)).expect("element exists");

    // Candidates satisfying A1.
    let mut domains: Vec<Vec<MorId>> = Vec::with_capacity(elems.len());
    for &(a, xe) in &elems {
        let cands = x
            .restriction_idempotents(a)?
            .into_iter()
            .filter(|&e| p.act(e, xe) == xe)
            .collect();
        domains.push(cands);
    }
    // Binary constraints (i, j, g) with element j = (element i)·g.
    let mut constraints = Vec::new();
    for (i, &(a, xe)) in elems.iter().enumerate() {
        for g in c.into_obj(a) {
            constraints.push((i, flat(c.dom(g), p.act(g, xe)), g));
        }
    }
    let compatible = |g: MorId, xbar: MorId, ybar: MorId| {
        let a3 = c.compose(xbar, g) == c.compose(g, ybar);
        let a2 = !(c.dom(g) == c.cod(g) && x.is_restriction_idempotent(g)) || ybar == c.compose(xbar, g);
        a3 && a2
    };

    // Arc consistency.
    let mut changed = true;
    while changed {
        changed = false;
        for &(i, j, g) in &constraints {
            let before = (domains[i].len(), domains[j].len());
            let dj = domains[j].clone();
            domains[i].retain(|&xb| dj.iter().any(|&yb| compatible(g, xb, yb)));
            let di = domains[i].clone();
            domains[j].retain(|&yb| di.iter().any(|&xb| compatible(g, xb, yb)));
            changed |= before != (domains[i].len(), domains[j].len());
        }
    }

    let mut by_elem: Vec<Vec<(usize, usize, MorId)>> = vec![Vec::new(); elems.len()];
    for &(i, j, g) in &constraints {
        by_elem[i].push((i, j, g));
        by_elem[j].push((i, j, g));
    }
    let mut assign: Vec<Option<MorId>> = vec![None; elems.len()];
    let mut found = Vec::new();
    search(0, &domains, &by_elem, &compatible, &mut assign, &mut found);

    let mut out = Vec::new();
    for sol in found {
        let mut elbar: Vec<Vec<MorId>> = c.objects().map(|a| Vec::with_capacity(p.len(a))).collect();
        for (k, &(a, _)) in elems.iter().enumerate() {
            elbar[a.0].push(sol[k]);
        }
        if !check_restriction_presheaf(x, p, &elbar)?.passed() {
            return Err(Error::internal(
                "constraint search produced an invalid restriction structure",
            ));
        }
        out.push(elbar);
    }
    if out.len() >= 2 {
        return Err(Error::internal("found two restriction structures on one presheaf"));
    }
    Ok(out)
}

fn search(
    k: usize,
    domains: &[Vec<MorId>],
    by_elem: &[Vec<(usize, usize, MorId)>],
    compatible: &dyn Fn(MorId, MorId, MorId) -> bool,
    assign: &mut Vec<Option<MorId>>,
    found: &mut Vec<Vec<MorId>>,
) {
    if found.len() >= 2 {
        return;
    }
    if k == domains.len() {
        found.push(assign.iter().map(|v| v.expect("assigned")).collect());
        return;
    }
    for &cand in &domains[k] {
        assign[k] = Some(cand);
        let ok = by_elem[k].iter().all(|&(i, j, g)| match (assign[i], assign[j]) {
            (Some(xb), Some(yb)) => compatible(g, xb, yb),
            _ => true,
        });
        if ok {
            search(k + 1, domains, by_elem, compatible, assign, found);
        }
        assign[k] = None;
    }
}

/// `y_r(A)`: the representable with `elbar(f) = f̄`.
pub fn yoneda_r(x: &RestrCat, a: ObjId) -> Result<RestrictionPresheaf> {
    let c = x.cat();
    let psh = yoneda(c, a)?;
    let elbar = c
        .objects()
        .map(|b| c.hom(b, a).iter().map(|&f| x.bar(f)).collect())
        .collect();
    RestrictionPresheaf::new(x, psh, elbar)
}

/// `ᾱ_A(x) = x·bar(α_A(x))`.
pub fn restriction_of_nat(
    x: &RestrCat,
    p: &RestrictionPresheaf,
    q: &RestrictionPresheaf,
    alpha: &PresheafMap,
) -> Result<PresheafMap> {
    let c = x.cat();
    if !check_presheaf_map(c, p.psh(), q.psh(), alpha.components())?.passed() {
        return Err(Error::input("the natural transformation is not natural"));
    }
    PresheafMap::from_fn(c, p.psh(), p.psh(), |a, xe| {
        p.psh().act(q.elbar(a, alpha.at(a, xe)), xe)
    })
    .map_err(|e| Error::internal(format!("restriction of a natural map is not natural: {e}")))
}

/// Whether `bar(α_A(x)) = x̄` everywhere.
pub fn preserves_restriction(p: &RestrictionPresheaf, q: &RestrictionPresheaf, alpha: &PresheafMap) -> bool {
    p.psh()
        .elements()
        .into_iter()
        .all(|(a, xe)| q.elbar(a, alpha.at(a, xe)) == p.elbar(a, xe))
}

/// Whether `ᾱ` is the identity. Disagreement with restriction preservation is
/// an internal error.
pub fn is_total_nat(
    x: &RestrCat,
    p: &RestrictionPresheaf,
    q: &RestrictionPresheaf,
    alpha: &PresheafMap,
) -> Result<bool> {
    let total = restriction_of_nat(x, p, q, alpha)? == PresheafMap::identity(p.psh());
    if total != preserves_restriction(p, q, alpha) {
        return Err(Error::internal("totality and restriction preservation disagree"));
    }
    Ok(total)
}

/// Splitting of a restriction idempotent `ᾱ` on `P` through its fixed points.
#[derive(Debug, Clone)]
pub struct PshrSplitting {
    pub q: RestrictionPresheaf,
    /// Inclusion `Q ⇒ P`.
    pub mu: PresheafMap,
    /// Retraction `P ⇒ Q`.
    pub rho: PresheafMap,
}

pub fn split_in_pshr(x: &RestrCat, p: &RestrictionPresheaf, abar: &PresheafMap) -> Result<PshrSplitting> {
    let c = x.cat();
    if !check_presheaf_map(c, p.psh(), p.psh(), abar.components())?.passed() {
        return Err(Error::input("the idempotent is not natural"));
    }
    if abar.then(abar) != *abar {
        return Err(Error::precondition("the map is not idempotent"));
    }
    if restriction_of_nat(x, p, p, abar)? != *abar {
        return Err(Error::precondition("the map is not a restriction idempotent"));
    }
    let mask: Vec<Vec<bool>> = c
        .objects()
        .map(|a| (0..p.psh().len(a)).map(|xe| abar.at(a, xe) == xe).collect())
        .collect();
    let (qp, mu) = subpresheaf(c, p.psh(), &mask)?;
    let elbar = c
        .objects()
        .map(|a| mu.components()[a.0].iter().map(|&xe| p.elbar(a, xe)).collect())
        .collect();
    let q = RestrictionPresheaf::new(x, qp, elbar)
        .map_err(|e| Error::internal(format!("fixed points are not a restriction presheaf: {e}")))?;
    let rho = PresheafMap::from_fn(c, p.psh(), q.psh(), |a, xe| {
        let fixed = abar.at(a, xe);
        mu.components()[a.0]
            .iter()
            .position(|&k| k == fixed)
            .expect("image of the idempotent is fixed")
    })?;
    if rho.then(&mu) != *abar || mu.then(&rho) != PresheafMap::identity(q.psh()) {
        return Err(Error::internal("fixed-point splitting does not split the idempotent"));
    }
    Ok(PshrSplitting { q, mu, rho })
}

/// `Q(A, e)`: the splitting of `y_r(e)` on `y_r(A)`.
pub fn q_split(x: &RestrCat, a: ObjId, e: MorId) -> Result<RestrictionPresheaf> {
    let c = x.cat();
    c.check_obj(a)?;
    c.check_mor(e)?;
    if c.dom(e) != a || !x.is_restriction_idempotent(e) {
        return Err(Error::precondition(format!(
            "`{}` is not a restriction idempotent on `{}`",
            c.mor_name(e),
            c.obj_name(a)
        )));
    }
    let ya = yoneda_r(x, a)?;
    let (_, _, post) = yoneda_map(c, e)?;
    Ok(split_in_pshr(x, &ya, &post)?.q)
}

/// Representables and their `Q(A, e)` splittings for every non-identity
/// restriction idempotent `e`.
pub fn generated_family(x: &RestrCat) -> Result<Vec<(String, RestrictionPresheaf)>> {
    let c = x.cat();
    let mut out = Vec::new();
    for a in c.objects() {
        out.push((format!("y_r({})", c.obj_name(a)), yoneda_r(x, a)?));
    }
    for a in c.objects() {
        for e in x.restriction_idempotents(a)? {
            if e != c.id(a) {
                out.push((format!("Q({},{})", c.obj_name(a), c.mor_name(e)), q_split(x, a, e)?));
            }
        }
    }
    Ok(out)
}

/// The restriction-category laws for `α ↦ ᾱ`, structure uniqueness,
/// totality versus restriction preservation, and splitting of restriction
/// idempotents, over all natural transformations among `family`.
pub fn check_family(x: &RestrCat, family: &[(String, RestrictionPresheaf)]) -> Result<CheckReport> {
    let c = x.cat();
    let mut r = CheckReport::new("restriction-presheaf-family");
    let n = family.len();
    let mut maps: Vec<Vec<Vec<PresheafMap>>> = vec![vec![Vec::new(); n]; n];
    let mut bars: Vec<Vec<Vec<PresheafMap>>> = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        let (pname, p) = &family[i];
        let inferred = infer_restriction_structure(x, p.psh())?;
        r.expect("uniqueness", inferred.len() == 1 && inferred[0] == p.elbar, || {
            vec![("presheaf", pname.clone())]
        });
        for j in 0..n {
            let q = &family[j].1;
            for alpha in enumerate_maps(c, p.psh(), q.psh()) {
                let abar = restriction_of_nat(x, p, q, &alpha)?;
                let total = abar == PresheafMap::identity(p.psh());
                r.expect(
                    "totality-iff-preserves-restriction",
                    total == preserves_restriction(p, q, &alpha),
                    || vec![("from", pname.clone()), ("to", family[j].0.clone())],
                );
                bars[i][j].push(abar);
                maps[i][j].push(alpha);
            }
        }
    }
    for i in 0..n {
        let w = |j: usize, k: usize| {
            vec![
                ("P", family[i].0.clone()),
                ("Q", family[j].0.clone()),
                ("R", family[k].0.clone()),
            ]
        };
        for j in 0..n {
            for (alpha, abar) in maps[i][j].iter().zip(&bars[i][j]) {
                r.expect("R1", abar.then(alpha) == *alpha, || w(j, j));
                for k in 0..n {
                    for bbar in &bars[i][k] {
                        r.expect("R2", bbar.then(abar) == abar.then(bbar), || w(j, k));
                        // bar(α∘β̄) = ᾱ∘β̄
                        let composite = bbar.then(alpha);
                        let lhs = restriction_of_nat(x, &family[i].1, &family[j].1, &composite)?;
                        r.expect("R3", lhs == bbar.then(abar), || w(j, k));
                    }
                    for (beta, bbar) in maps[j][k].iter().zip(&bars[j][k]) {
                        let ba = alpha.then(beta);
                        let ba_bar = restriction_of_nat(x, &family[i].1, &family[k].1, &ba)?;
                        r.expect("R4", alpha.then(bbar) == ba_bar.then(alpha), || w(j, k));
                    }
                }
            }
        }
        for (alpha, abar) in maps[i][i].iter().zip(&bars[i][i]) {
            if alpha == abar {
                let split = split_in_pshr(x, &family[i].1, alpha);
                r.expect("splitting", split.is_ok(), || vec![("presheaf", family[i].0.clone())]);
            }
        }
    }
    Ok(r.finish())
}
