//! Normal forms `γ = T(translations) ∘ τ` in groups defined by labelled graphs.
//!
//! An element acts by `x ↦ T(τ(x))`: first the finite-support permutation, then
//! the translation part, which moves points far from the root rigidly.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gluing::shift_along;
use crate::group::{BaseGroup, Group};
use crate::labelled_graph::{Component, LabelledGraph, Letter, Sign, Structure, Vertex};
use crate::perm::{FinPerm, Parity};

/// Translation tuple (one entry per infinite factor) and finite-support residue.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub translations: Vec<Vertex>,
    pub perm: FinPerm,
}

impl GroupElement {
    pub fn perm_only(perm: FinPerm) -> Self {
        GroupElement { translations: Vec::new(), perm }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.translations.iter().map(|v| v.to_string()).collect();
        write!(f, "<{}>{}", t.join(";"), self.perm)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s.strip_prefix('<').ok_or_else(|| Error::Parse(format!("bad element `{s}`")))?;
        let end = body.find('>').ok_or_else(|| Error::Parse(format!("bad element `{s}`")))?;
        let translations = if body[..end].is_empty() {
            Vec::new()
        } else {
            body[..end].split(';').map(|t| t.parse()).collect::<Result<Vec<Vertex>>>()?
        };
        Ok(GroupElement { translations, perm: body[end + 1..].parse()? })
    }
}

#[derive(Clone, Debug)]
enum Kind {
    /// Rooted gluing of Cayley graphs; `infinite` lists the components carrying translations.
    Rooted { comps: Vec<Component>, infinite: Vec<usize>, finite_points: Vec<Vertex> },
    Star { base: BaseGroup },
    Houghton { rays: usize },
    /// Finite universe: elements are permutations of it.
    Finite { universe: Arc<Vec<Vertex>> },
}

/// The group generated by the letters of a labelled graph, with exact normal forms.
#[derive(Clone)]
pub struct GluedGroup {
    graph: LabelledGraph,
    kind: Kind,
    letters: Vec<GroupElement>,
}

impl fmt::Debug for GluedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GluedGroup").field("graph", &self.graph.name()).field("kind", &self.kind).finish()
    }
}

type RawAction<'a> = &'a dyn Fn(&Vertex) -> Result<Vertex>;

impl GluedGroup {
    pub fn new(graph: LabelledGraph) -> Result<Self> {
        let kind = if let Some(universe) = graph.finite_vertices() {
            Kind::Finite { universe: Arc::new(universe.to_vec()) }
        } else {
            match graph.structure() {
                Structure::Cayley { base, generators } => {
                    let comp = Component {
                        base: base.clone(),
                        generators: generators.clone(),
                        embed: crate::labelled_graph::Embed::Native,
                    };
                    Kind::Rooted { comps: vec![comp], infinite: vec![0], finite_points: Vec::new() }
                }
                Structure::Rooted(comps) => {
                    let infinite = (0..comps.len()).filter(|&c| !comps[c].base.is_finite()).collect();
                    let root = graph.root().clone();
                    let mut finite_points = BTreeSet::new();
                    for c in comps.iter().filter(|c| c.base.is_finite()) {
                        for h in c.base.elements().unwrap() {
                            finite_points.insert(c.to_point(&h, &root));
                        }
                    }
                    Kind::Rooted { comps: comps.clone(), infinite, finite_points: finite_points.into_iter().collect() }
                }
                Structure::Star { base, .. } => Kind::Star { base: base.clone() },
                Structure::Houghton { rays } => Kind::Houghton { rays: *rays },
                Structure::Schreier => {
                    return Err(Error::Unsupported(format!(
                        "{} is an infinite Schreier graph without normal forms",
                        graph.name()
                    )))
                }
            }
        };
        let mut group = GluedGroup { graph, kind, letters: Vec::new() };
        let mut letters = Vec::new();
        for g in 1..=group.graph.alphabet_size() {
            let act = group.graph.raw_action(g);
            let f = move |x: &Vertex| Ok(act(x, Sign::Pos));
            letters.push(group.from_action(&f, 1, false)?);
        }
        group.letters = letters;
        Ok(group)
    }

    pub fn graph(&self) -> &LabelledGraph {
        &self.graph
    }

    pub fn root(&self) -> &Vertex {
        self.graph.root()
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, Kind::Finite { .. })
    }

    /// Number of translation coordinates carried by elements.
    pub fn translation_arity(&self) -> usize {
        match &self.kind {
            Kind::Rooted { infinite, .. } => infinite.len(),
            Kind::Star { base } => usize::from(!base.is_finite()),
            Kind::Houghton { rays } => rays - 1,
            Kind::Finite { .. } => 0,
        }
    }

    /// Normal form of a single letter.
    pub fn letter(&self, l: Letter) -> GroupElement {
        let g = &self.letters[l.generator - 1];
        match l.sign {
            Sign::Pos => g.clone(),
            Sign::Neg => self.inv(g),
        }
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.letters
    }

    /// Symmetric generating set `{λ, λ⁻¹}` with duplicates removed.
    pub fn symmetric_generators(&self) -> Vec<GroupElement> {
        let mut out: Vec<GroupElement> =
            self.letters.iter().flat_map(|g| [g.clone(), self.inv(g)]).collect();
        out.sort();
        out.dedup();
        out
    }

    /// `λ₁ ∘ … ∘ λₙ`, the last letter acting first.
    pub fn word_element(&self, word: &[Letter]) -> GroupElement {
        word.iter().fold(self.identity(), |acc, &l| self.mul(&acc, &self.letter(l)))
    }

    /// Checks that `g` has the shape of an element of this group.
    pub fn check(&self, g: &GroupElement) -> Result<()> {
        let ok = g.translations.len() == self.translation_arity()
            && match &self.kind {
                Kind::Rooted { comps, infinite, .. } => {
                    infinite.iter().zip(&g.translations).all(|(&c, t)| comps[c].base.contains(t))
                }
                Kind::Star { base } => g.translations.iter().all(|t| base.contains(t)),
                Kind::Houghton { .. } => g.translations.iter().all(|t| matches!(t, Vertex::Int(_))),
                Kind::Finite { .. } => true,
            }
            && g.perm.support().all(|x| self.graph.contains(x) || !self.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::MismatchedGroups(format!("{g} is not an element of {}", self.graph.name())))
        }
    }

    // ---- translation parts -------------------------------------------------

    fn rooted_step(comp: &Component, g: &Vertex, x: &Vertex, root: &Vertex) -> Vertex {
        match comp.from_point(x, root) {
            Some(h) => comp.to_point(&comp.base.mul(g, &h), root),
            None => x.clone(),
        }
    }

    fn houghton_step(rays: usize, i: usize, m: i64, x: &Vertex) -> Vertex {
        shift_along(x, i, rays, m)
    }

    /// `T(t)(x)`.
    pub fn translate(&self, t: &[Vertex], x: &Vertex) -> Vertex {
        match &self.kind {
            Kind::Rooted { comps, infinite, .. } => {
                let root = self.root();
                infinite
                    .iter()
                    .zip(t)
                    .rev()
                    .fold(x.clone(), |y, (&c, g)| Self::rooted_step(&comps[c], g, &y, root))
            }
            Kind::Star { base } => match t.first() {
                Some(g) => base.mul(g, x),
                None => x.clone(),
            },
            Kind::Houghton { rays } => t
                .iter()
                .enumerate()
                .rev()
                .fold(x.clone(), |y, (i, z)| Self::houghton_step(*rays, i + 1, int(z), &y)),
            Kind::Finite { .. } => x.clone(),
        }
    }

    /// `T(t)⁻¹(x)`.
    pub fn translate_inv(&self, t: &[Vertex], x: &Vertex) -> Vertex {
        match &self.kind {
            Kind::Rooted { comps, infinite, .. } => {
                let root = self.root();
                infinite.iter().zip(t).fold(x.clone(), |y, (&c, g)| {
                    Self::rooted_step(&comps[c], &comps[c].base.inv(g), &y, root)
                })
            }
            Kind::Star { base } => match t.first() {
                Some(g) => base.mul(&base.inv(g), x),
                None => x.clone(),
            },
            Kind::Houghton { rays } => t
                .iter()
                .enumerate()
                .fold(x.clone(), |y, (i, z)| Self::houghton_step(*rays, i + 1, -int(z), &y)),
            Kind::Finite { .. } => x.clone(),
        }
    }

    /// Action `γ(x) = T(τ(x))`.
    pub fn act(&self, g: &GroupElement, x: &Vertex) -> Vertex {
        self.translate(&g.translations, &g.perm.apply(x))
    }

    fn mul_translations(&self, a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
        match &self.kind {
            Kind::Rooted { comps, infinite, .. } => {
                infinite.iter().zip(a.iter().zip(b)).map(|(&c, (x, y))| comps[c].base.mul(x, y)).collect()
            }
            Kind::Star { base } => a.iter().zip(b).map(|(x, y)| base.mul(x, y)).collect(),
            Kind::Houghton { .. } => a.iter().zip(b).map(|(x, y)| Vertex::Int(int(x) + int(y))).collect(),
            Kind::Finite { .. } => Vec::new(),
        }
    }

    fn inv_translations(&self, a: &[Vertex]) -> Vec<Vertex> {
        match &self.kind {
            Kind::Rooted { comps, infinite, .. } => {
                infinite.iter().zip(a).map(|(&c, x)| comps[c].base.inv(x)).collect()
            }
            Kind::Star { base } => a.iter().map(|x| base.inv(x)).collect(),
            Kind::Houghton { .. } => a.iter().map(|x| Vertex::Int(-int(x))).collect(),
            Kind::Finite { .. } => Vec::new(),
        }
    }

    /// Points where composing the translation parts `T(a) ∘ T(b)` can disagree with
    /// `T(ab)`, or where `T(a) ∘ T(b)` fails to be the identity when `b = a⁻¹`.
    fn anomalies(&self, a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
        match &self.kind {
            Kind::Rooted { comps, infinite, .. } => {
                let root = self.root();
                let ab = self.mul_translations(a, b);
                let chain = |ts: &[&[Vertex]]| -> Vec<(usize, Vertex)> {
                    ts.iter().flat_map(|t| infinite.iter().copied().zip(t.iter().cloned())).collect()
                };
                let mut out = vec![root.clone()];
                for ch in [chain(&[a, b]), chain(&[&ab])] {
                    // The point whose image after the factors j..n is the root.
                    for j in 0..ch.len() {
                        let mut y = root.clone();
                        for (c, g) in &ch[j..] {
                            y = Self::rooted_step(&comps[*c], &comps[*c].base.inv(g), &y, root);
                        }
                        out.push(y);
                    }
                }
                out
            }
            Kind::Houghton { rays } => {
                let ab = self.mul_translations(a, b);
                let r: i64 = [a, b, &ab].iter().flat_map(|t| t.iter()).map(|z| int(z).abs()).sum::<i64>() + 1;
                star_points(*rays, r as u64)
            }
            _ => Vec::new(),
        }
    }

    fn residue_on(&self, candidates: impl IntoIterator<Item = Vertex>, t: &[Vertex], f: RawAction) -> Result<FinPerm> {
        let mut pairs = Vec::new();
        let mut seen = HashSet::new();
        for x in candidates {
            if seen.insert(x.clone()) {
                let y = self.translate_inv(t, &f(&x)?);
                if y != x {
                    pairs.push((x, y));
                }
            }
        }
        FinPerm::from_pairs(pairs).map_err(|_| {
            Error::UnstableFarField("finite-support residue is not closed on the probed region".into())
        })
    }

    // ---- probe-based normal forms ------------------------------------------

    fn ball_points(&self, f_neighbours: bool, radius: usize) -> Result<Vec<Vertex>> {
        let g = &self.graph;
        let mut seen: HashSet<Vertex> = HashSet::new();
        seen.insert(g.root().clone());
        let mut layer = vec![g.root().clone()];
        let mut out = layer.clone();
        for _ in 0..radius {
            let mut next = Vec::new();
            for v in &layer {
                for l in 1..=g.alphabet_size() {
                    for s in [Sign::Pos, Sign::Neg] {
                        let w = if f_neighbours {
                            g.letter_action(v, Letter { generator: l, sign: s })?
                        } else {
                            (g.raw_action(l))(v, s)
                        };
                        if seen.insert(w.clone()) {
                            next.push(w);
                        }
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        Ok(out)
    }

    /// Normal form of a bijection `f` that moves every point by at most `reach` steps,
    /// read from far-field probes. `windowed` routes ball enumeration through the window.
    fn from_action(&self, f: RawAction, reach: usize, windowed: bool) -> Result<GroupElement> {
        match &self.kind {
            Kind::Finite { universe } => {
                let perm = self.residue_on(universe.iter().cloned(), &[], f)?;
                Ok(GroupElement::perm_only(perm))
            }
            Kind::Rooted { comps, infinite, finite_points } => {
                let root = self.root().clone();
                let mut translations = Vec::new();
                for &c in infinite {
                    let comp = &comps[c];
                    let norm = comp.generators.iter().map(BaseGroup::sup_norm).max().unwrap_or(1).max(1);
                    let m = reach as i64 * norm + 1;
                    let mut read = Vec::new();
                    for (k, axis) in [(m, 0usize), (m + 1, 1)] {
                        let p = comp.base.far_point(k, axis).expect("infinite base");
                        let image = f(&comp.to_point(&p, &root))?;
                        let q = comp.from_point(&image, &root).ok_or_else(|| {
                            Error::UnstableFarField(format!("probe {p} left its component"))
                        })?;
                        read.push(comp.base.mul(&q, &comp.base.inv(&p)));
                    }
                    if read[0] != read[1] {
                        return Err(Error::UnstableFarField(format!(
                            "probes disagree on component {c}: {} vs {}",
                            read[0], read[1]
                        )));
                    }
                    translations.push(read.swap_remove(0));
                }
                let mut region = self.ball_points(windowed, reach)?;
                region.extend(finite_points.iter().cloned());
                let perm = self.residue_on(region, &translations, f)?;
                Ok(GroupElement { translations, perm })
            }
            Kind::Star { base } => {
                let mut translations = Vec::new();
                if !base.is_finite() {
                    let norm = match self.graph.structure() {
                        Structure::Star { generators, .. } => {
                            generators.iter().map(BaseGroup::sup_norm).max().unwrap_or(1).max(1)
                        }
                        _ => 1,
                    };
                    let m = (reach as i64 + 2) * norm + 1;
                    let mut read = Vec::new();
                    for (k, axis) in [(m, 0usize), (m + 1, 1)] {
                        let p = base.far_point(k, axis).expect("infinite base");
                        let image = f(&p)?;
                        read.push(base.mul(&image, &base.inv(&p)));
                    }
                    if read[0] != read[1] {
                        return Err(Error::UnstableFarField(format!("probes disagree: {} vs {}", read[0], read[1])));
                    }
                    translations.push(read.swap_remove(0));
                }
                let region = self.ball_points(windowed, reach + 1)?;
                let perm = self.residue_on(region, &translations, f)?;
                Ok(GroupElement { translations, perm })
            }
            Kind::Houghton { rays } => {
                let k = *rays;
                let mut phi = Vec::with_capacity(k);
                for i in 1..=k {
                    let mut read = Vec::new();
                    for d in [reach as u64 + 2, reach as u64 + 3] {
                        match f(&Vertex::ray(i as u32, d))? {
                            Vertex::Ray { ray, depth } if ray as usize == i => read.push(depth as i64 - d as i64),
                            other => {
                                return Err(Error::UnstableFarField(format!("probe R{i}:{d} moved to {other}")))
                            }
                        }
                    }
                    if read[0] != read[1] {
                        return Err(Error::UnstableFarField(format!("ray {i} probes disagree")));
                    }
                    phi.push(read[0]);
                }
                if phi.iter().sum::<i64>() != 0 {
                    return Err(Error::UnstableFarField(format!("translation vector {phi:?} does not sum to 0")));
                }
                let translations: Vec<Vertex> = phi[..k - 1].iter().map(|p| Vertex::Int(-p)).collect();
                let region = star_points(k, 2 * reach as u64 + 2);
                let perm = self.residue_on(region, &translations, f)?;
                Ok(GroupElement { translations, perm })
            }
        }
    }

    /// Components of a rooted gluing, if this is one.
    pub fn components(&self) -> Option<&[Component]> {
        match &self.kind {
            Kind::Rooted { comps, .. } => Some(comps),
            _ => None,
        }
    }

    /// Indices of the components that carry a translation coordinate, in coordinate order.
    pub fn infinite_components(&self) -> &[usize] {
        match &self.kind {
            Kind::Rooted { infinite, .. } => infinite,
            _ => &[],
        }
    }

    /// Base group of a star extension.
    pub fn star_base(&self) -> Option<&BaseGroup> {
        match &self.kind {
            Kind::Star { base } => Some(base),
            _ => None,
        }
    }

    /// Number of rays of a Houghton group.
    pub fn houghton_rays(&self) -> Option<usize> {
        match &self.kind {
            Kind::Houghton { rays } => Some(*rays),
            _ => None,
        }
    }

    /// Point of component `c` corresponding to the base element `g`.
    pub fn component_point(&self, c: usize, g: &Vertex) -> Result<Vertex> {
        let comps = self.components().ok_or_else(|| Error::Unsupported("not a rooted gluing".into()))?;
        let comp = comps.get(c).ok_or_else(|| Error::InvalidParameter(format!("no component {c}")))?;
        Ok(comp.to_point(g, self.root()))
    }

    /// The element of component `c` given by `g`, acting on that component by left translation.
    pub fn embed_component(&self, c: usize, g: &Vertex) -> Result<GroupElement> {
        let comps = self.components().ok_or_else(|| Error::Unsupported("not a rooted gluing".into()))?;
        let comp = comps.get(c).ok_or_else(|| Error::InvalidParameter(format!("no component {c}")))?;
        if !comp.base.contains(g) {
            return Err(Error::MismatchedGroups(format!("{g} is not in {}", comp.base.describe())));
        }
        let root = self.root().clone();
        if let Some(slot) = self.infinite_components().iter().position(|&i| i == c) {
            let mut translations: Vec<Vertex> =
                self.infinite_components().iter().map(|&i| comps[i].base.identity()).collect();
            translations[slot] = g.clone();
            return Ok(GroupElement { translations, perm: FinPerm::identity() });
        }
        let pairs = comp.base.elements().expect("finite component").into_iter().map(|h| {
            let from = comp.to_point(&h, &root);
            let to = comp.to_point(&comp.base.mul(g, &h), &root);
            (from, to)
        });
        let perm = FinPerm::from_pairs(pairs)?;
        let translations = self.infinite_components().iter().map(|&i| comps[i].base.identity()).collect();
        Ok(GroupElement { translations, perm })
    }

    /// True when some letter has an odd finitary part, so the finitary subgroup is all of `S₀`.
    pub fn has_odd_generator(&self) -> bool {
        self.letters.iter().any(|g| g.perm.parity() == Parity::Odd)
    }

    /// Normal form of a finitary bijection given pointwise, moving points at most `reach` steps.
    pub fn element_from_map(&self, f: &dyn Fn(&Vertex) -> Vertex, reach: usize) -> Result<GroupElement> {
        let g = |x: &Vertex| Ok(f(x));
        self.from_action(&g, reach, false)
    }

    /// Eventual-translation vector. For Houghton groups this is the per-ray depth change.
    pub fn phi_quotient(&self, g: &GroupElement) -> Result<Vec<i64>> {
        match &self.kind {
            Kind::Houghton { .. } => {
                let z: Vec<i64> = g.translations.iter().map(int).collect();
                let mut phi: Vec<i64> = z.iter().map(|x| -x).collect();
                phi.push(z.iter().sum());
                Ok(phi)
            }
            Kind::Finite { .. } => Err(Error::UndefinedQuotient("finite universe has no translations".into())),
            Kind::Star { base } if base.is_finite() => {
                Err(Error::UndefinedQuotient("finite base group has no translations".into()))
            }
            Kind::Rooted { infinite, .. } if infinite.is_empty() => {
                Err(Error::UndefinedQuotient("no infinite factor".into()))
            }
            _ => Ok(g.translations.iter().flat_map(coordinates).collect()),
        }
    }

    pub fn parity(&self, g: &GroupElement) -> Parity {
        g.perm.parity()
    }
}

fn int(v: &Vertex) -> i64 {
    match v {
        Vertex::Int(n) => *n,
        _ => panic!("expected an integer translation, got {v}"),
    }
}

fn coordinates(v: &Vertex) -> Vec<i64> {
    match v {
        Vertex::Int(n) => vec![*n],
        Vertex::Lattice(c) => c.clone(),
        _ => Vec::new(),
    }
}

/// All points of `Y_k` at depth at most `r`.
pub fn star_points(rays: usize, r: u64) -> Vec<Vertex> {
    let mut out = vec![Vertex::Root];
    for i in 1..=rays as u32 {
        out.extend((1..=r).map(|d| Vertex::ray(i, d)));
    }
    out
}

impl Group for GluedGroup {
    type Elem = GroupElement;

    fn identity(&self) -> GroupElement {
        let translations = match &self.kind {
            Kind::Rooted { comps, infinite, .. } => infinite.iter().map(|&c| comps[c].base.identity()).collect(),
            Kind::Star { base } if !base.is_finite() => vec![base.identity()],
            Kind::Houghton { rays } => vec![Vertex::Int(0); rays - 1],
            _ => Vec::new(),
        };
        GroupElement { translations, perm: FinPerm::identity() }
    }

    fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        if let Kind::Finite { .. } = self.kind {
            return GroupElement::perm_only(a.perm.compose(&b.perm));
        }
        let translations = self.mul_translations(&a.translations, &b.translations);
        let mut candidates: Vec<Vertex> = b.perm.support().cloned().collect();
        candidates.extend(a.perm.support().map(|x| self.translate_inv(&b.translations, x)));
        candidates.extend(self.anomalies(&a.translations, &b.translations));
        let f = |x: &Vertex| Ok(self.act(a, &self.act(b, x)));
        let perm = self.residue_on(candidates, &translations, &f).expect("product residue is a permutation");
        GroupElement { translations, perm }
    }

    fn inv(&self, a: &GroupElement) -> GroupElement {
        if let Kind::Finite { .. } = self.kind {
            return GroupElement::perm_only(a.perm.inverse());
        }
        let translations = self.inv_translations(&a.translations);
        let mut candidates: Vec<Vertex> = a.perm.support().map(|x| self.translate(&a.translations, x)).collect();
        candidates.extend(self.anomalies(&a.translations, &translations));
        let inv_perm = a.perm.inverse();
        let f = |x: &Vertex| Ok(inv_perm.apply(&self.translate_inv(&a.translations, x)));
        let perm = self.residue_on(candidates, &translations, &f).expect("inverse residue is a permutation");
        GroupElement { translations, perm }
    }

    fn encode(&self, a: &GroupElement) -> String {
        a.to_string()
    }

    fn name(&self) -> String {
        self.graph.name().to_string()
    }
}

/// Word evaluated through the (possibly windowed) graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordEvaluation {
    pub element: GroupElement,
    /// Far-field translation vector, when the group has one.
    pub phi: Option<Vec<i64>>,
    pub length: usize,
}

/// Evaluates a word by following edges in the graph, reading translations from
/// far probes and the residue from the ball of radius `|w|` (plus any finite factors).
pub fn evaluate_word(group: &GluedGroup, word: &[Letter]) -> Result<WordEvaluation> {
    let graph = group.graph();
    let f = |x: &Vertex| graph.word_action(x, word);
    let element = group.from_action(&f, word.len().max(1), true)?;
    let phi = group.phi_quotient(&element).ok();
    Ok(WordEvaluation { element, phi, length: word.len() })
}

pub fn normal_form(group: &GluedGroup, word: &[Letter]) -> Result<GroupElement> {
    evaluate_word(group, word).map(|e| e.element)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gluing::{build_houghton, pocket_extension, rooted_gluing, HoughtonSpec};
    use crate::labelled_graph::build_cayley;

    fn gamma_beta(b: u32) -> GluedGroup {
        let z = build_cayley(BaseGroup::Integers, vec![Vertex::Int(1)], None).unwrap();
        let c = build_cayley(BaseGroup::Cyclic(b), vec![Vertex::Residue(1)], None)
            .unwrap()
            .with_letters(vec!["beta".into()])
            .unwrap();
        GluedGroup::new(rooted_gluing(vec![z, c]).unwrap()).unwrap()
    }

    #[test]
    fn beta_is_a_rotation_at_the_root() {
        let g = gamma_beta(3);
        let beta = g.letter(Letter::pos(2));
        assert_eq!(beta.translations, vec![Vertex::Int(0)]);
        let expected = FinPerm::cycle(&[
            Vertex::Int(0),
            Vertex::glued(1, Vertex::Residue(1)),
            Vertex::glued(1, Vertex::Residue(2)),
        ])
        .unwrap();
        assert_eq!(beta.perm, expected);
    }

    #[test]
    fn commutator_of_s_and_beta() {
        let g = gamma_beta(2);
        let s = g.letter(Letter::pos(1));
        let beta = g.letter(Letter::pos(2));
        let c = g.commutator(&s, &beta);
        let star = Vertex::glued(1, Vertex::Residue(1));
        assert_eq!(c.translations, vec![Vertex::Int(0)]);
        assert_eq!(c.perm, FinPerm::cycle(&[Vertex::Int(0), Vertex::Int(1), star]).unwrap());
    }

    #[test]
    fn pocket_word_tau_s() {
        let z = build_cayley(BaseGroup::Integers, vec![Vertex::Int(1)], None).unwrap();
        let g = GluedGroup::new(pocket_extension(z).unwrap()).unwrap();
        let word = g.graph().parse_word("tau.s").unwrap();
        let e = normal_form(&g, &word).unwrap();
        assert_eq!(e.translations, vec![Vertex::Int(1)]);
        assert_eq!(e.perm, FinPerm::transposition(Vertex::Star, Vertex::Int(-1)));
        assert_eq!(e, g.word_element(&word));
    }

    #[test]
    fn houghton_generator_normal_form() {
        let g = GluedGroup::new(build_houghton(&HoughtonSpec::standard(3), None).unwrap()).unwrap();
        let h12 = g.letter(Letter::pos(1));
        assert_eq!(g.phi_quotient(&h12).unwrap(), vec![-1, 1, 0]);
        let h13 = g.letter(Letter::pos(2));
        assert_eq!(g.phi_quotient(&h13).unwrap(), vec![-1, 0, 1]);
        assert!(h13.perm.is_identity());
        let c = g.commutator(&h12, &h13);
        assert_eq!(g.phi_quotient(&c).unwrap(), vec![0, 0, 0]);
        assert_eq!(c.perm.support_len(), 2);
    }

    #[test]
    fn element_encoding_roundtrip() {
        let g = gamma_beta(3);
        let e = g.word_element(&g.graph().parse_word("s.beta.s^-1.beta").unwrap());
        let back: GroupElement = e.to_string().parse().unwrap();
        assert_eq!(back, e);
    }
}
