use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::BaseGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

/// A generator index (1-based) with a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn pos(generator: usize) -> Self {
        Letter { generator, sign: Sign::Pos }
    }

    pub fn neg(generator: usize) -> Self {
        Letter { generator, sign: Sign::Neg }
    }

    pub fn inverse(self) -> Self {
        Letter { generator: self.generator, sign: self.sign.flip() }
    }
}

/// Formal inverse of a word: reversed, each letter inverted.
pub fn inverse_word(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|l| l.inverse()).collect()
}

/// Vertex identifiers for every construction in the crate.
///
/// The derived order (discriminant, then payload) is the canonical order used
/// for all sorting and tie-breaking.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Vertex {
    Root,
    Star,
    Int(i64),
    Residue(u32),
    Lattice(Vec<i64>),
    FiniteElem(u32),
    Ray { ray: u32, depth: u64 },
    Bubble { word: Vec<u8>, offset: u64 },
    Glued { component: u32, inner: Box<Vertex> },
}

impl Vertex {
    pub fn glued(component: u32, inner: Vertex) -> Vertex {
        Vertex::Glued { component, inner: Box::new(inner) }
    }

    pub fn ray(ray: u32, depth: u64) -> Vertex {
        if depth == 0 {
            Vertex::Root
        } else {
            Vertex::Ray { ray, depth }
        }
    }

    pub fn bubble(word: &[u8], offset: u64) -> Vertex {
        Vertex::Bubble { word: word.to_vec(), offset }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Root => write!(f, "o"),
            Vertex::Star => write!(f, "*"),
            Vertex::Int(n) => write!(f, "{n}"),
            Vertex::Residue(r) => write!(f, "r{r}"),
            Vertex::Lattice(v) => {
                write!(f, "[")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            Vertex::FiniteElem(i) => write!(f, "e{i}"),
            Vertex::Ray { ray, depth } => write!(f, "R{ray}:{depth}"),
            Vertex::Bubble { word, offset } => {
                write!(f, "B")?;
                for d in word {
                    write!(f, "{d}")?;
                }
                write!(f, ":{offset}")
            }
            Vertex::Glued { component, inner } => write!(f, "g{component}/{inner}"),
        }
    }
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad vertex encoding `{s}`"));
        let s = s.trim();
        if s == "o" {
            return Ok(Vertex::Root);
        }
        if s == "*" {
            return Ok(Vertex::Star);
        }
        let first = s.chars().next().ok_or_else(bad)?;
        let rest = &s[first.len_utf8()..];
        match first {
            'r' => rest.parse().map(Vertex::Residue).map_err(|_| bad()),
            'e' => rest.parse().map(Vertex::FiniteElem).map_err(|_| bad()),
            '[' => {
                let body = rest.strip_suffix(']').ok_or_else(bad)?;
                if body.is_empty() {
                    return Ok(Vertex::Lattice(vec![]));
                }
                body.split(',')
                    .map(|x| x.trim().parse::<i64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()
                    .map(Vertex::Lattice)
            }
            'R' => {
                let (a, b) = rest.split_once(':').ok_or_else(bad)?;
                Ok(Vertex::Ray {
                    ray: a.parse().map_err(|_| bad())?,
                    depth: b.parse().map_err(|_| bad())?,
                })
            }
            'B' => {
                let (a, b) = rest.split_once(':').ok_or_else(bad)?;
                let word = a
                    .chars()
                    .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Vertex::Bubble { word, offset: b.parse().map_err(|_| bad())? })
            }
            'g' => {
                let (a, b) = rest.split_once('/').ok_or_else(bad)?;
                Ok(Vertex::glued(a.parse().map_err(|_| bad())?, b.parse()?))
            }
            _ => s.parse::<i64>().map(Vertex::Int).map_err(|_| bad()),
        }
    }
}

/// How a rooted component sits inside a rooted gluing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Embed {
    /// Vertices keep their own names; the component identity is the shared root.
    Native,
    /// Non-root vertices are wrapped as `Glued { component, .. }`.
    Namespaced(u32),
    /// Two-element group whose non-identity point is `Vertex::Star`.
    StarPoint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub base: BaseGroup,
    /// Generators of the component's Cayley graph, one per letter, in letter order.
    pub generators: Vec<Vertex>,
    pub embed: Embed,
}

impl Component {
    /// Point of the glued universe corresponding to the base element `g`.
    pub fn to_point(&self, g: &Vertex, root: &Vertex) -> Vertex {
        if *g == self.base.identity() {
            return root.clone();
        }
        match self.embed {
            Embed::Native => g.clone(),
            Embed::Namespaced(c) => Vertex::glued(c, g.clone()),
            Embed::StarPoint => Vertex::Star,
        }
    }

    /// Base element for a point of this component (the root maps to the identity).
    pub fn from_point(&self, x: &Vertex, root: &Vertex) -> Option<Vertex> {
        if x == root {
            return Some(self.base.identity());
        }
        match self.embed {
            Embed::Native => self.base.contains(x).then(|| x.clone()),
            Embed::Namespaced(c) => match x {
                Vertex::Glued { component, inner } if *component == c => Some((**inner).clone()),
                _ => None,
            },
            Embed::StarPoint => (*x == Vertex::Star).then_some(Vertex::Residue(1)),
        }
    }
}

/// Algebraic description of the group a graph presents, used to build normal forms.
#[derive(Clone, Debug)]
pub enum Structure {
    /// Only window actions are available.
    Schreier,
    Cayley { base: BaseGroup, generators: Vec<Vertex> },
    /// Rooted gluing of Cayley graphs; component 0 carries the root natively.
    Rooted(Vec<Component>),
    Star { base: BaseGroup, generators: Vec<Vertex> },
    Houghton { rays: usize },
}

pub type ActionFn = Arc<dyn Fn(&Vertex, Sign) -> Vertex + Send + Sync>;
pub type Membership = Arc<dyn Fn(&Vertex) -> bool + Send + Sync>;

/// Raw edge lists kept for graphs given explicitly, so validation can see defects
/// that a functional action would hide.
#[derive(Clone, Debug, Default)]
pub struct ExplicitEdges {
    pub per_letter: Vec<Vec<(Vertex, Vertex)>>,
}

/// A labelled graph whose letters act bijectively on the vertex universe.
#[derive(Clone)]
pub struct LabelledGraph {
    name: String,
    letters: Vec<String>,
    actions: Vec<ActionFn>,
    root: Vertex,
    contains: Membership,
    finite: Option<Arc<Vec<Vertex>>>,
    structure: Structure,
    explicit: Option<Arc<ExplicitEdges>>,
}

impl fmt::Debug for LabelledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LabelledGraph")
            .field("name", &self.name)
            .field("letters", &self.letters)
            .field("root", &self.root)
            .field("finite", &self.finite.as_ref().map(|v| v.len()))
            .finish()
    }
}

impl LabelledGraph {
    pub fn new(
        name: impl Into<String>,
        letters: Vec<String>,
        actions: Vec<ActionFn>,
        root: Vertex,
        contains: Membership,
    ) -> Self {
        assert_eq!(letters.len(), actions.len());
        LabelledGraph {
            name: name.into(),
            letters,
            actions,
            root,
            contains,
            finite: None,
            structure: Structure::Schreier,
            explicit: None,
        }
    }

    /// Graph on an explicit finite vertex list given by labelled edges `(letter, from, to)`.
    /// Vertices without an outgoing edge for a letter carry an implicit self-loop.
    pub fn from_edges(
        name: impl Into<String>,
        vertices: Vec<Vertex>,
        letters: Vec<String>,
        edges: &[(usize, Vertex, Vertex)],
        root: Vertex,
    ) -> Result<Self> {
        let known: HashSet<Vertex> = vertices.iter().cloned().collect();
        if !known.contains(&root) {
            return Err(Error::InvalidParameter(format!("root {root} not among vertices")));
        }
        let k = letters.len();
        let mut explicit = ExplicitEdges { per_letter: vec![Vec::new(); k] };
        let mut fwd: Vec<HashMap<Vertex, Vertex>> = vec![HashMap::new(); k];
        let mut bwd: Vec<HashMap<Vertex, Vertex>> = vec![HashMap::new(); k];
        for (letter, a, b) in edges {
            if *letter == 0 || *letter > k {
                return Err(Error::InvalidParameter(format!("letter index {letter} out of range")));
            }
            if !known.contains(a) || !known.contains(b) {
                return Err(Error::InvalidParameter(format!("edge {a} -> {b} leaves the vertex list")));
            }
            explicit.per_letter[letter - 1].push((a.clone(), b.clone()));
            fwd[letter - 1].entry(a.clone()).or_insert_with(|| b.clone());
            bwd[letter - 1].entry(b.clone()).or_insert_with(|| a.clone());
        }
        let actions = fwd
            .into_iter()
            .zip(bwd)
            .map(|(f, b)| {
                let f = Arc::new(f);
                let b = Arc::new(b);
                Arc::new(move |v: &Vertex, s: Sign| {
                    let map = if s == Sign::Pos { &f } else { &b };
                    map.get(v).cloned().unwrap_or_else(|| v.clone())
                }) as ActionFn
            })
            .collect();
        let mut sorted = vertices;
        sorted.sort();
        sorted.dedup();
        let set = Arc::new(known);
        let mut g = LabelledGraph::new(name, letters, actions, root, Arc::new(move |v| set.contains(v)));
        g.finite = Some(Arc::new(sorted));
        g.explicit = Some(Arc::new(explicit));
        Ok(g)
    }

    pub fn with_finite_universe(mut self, mut vertices: Vec<Vertex>) -> Self {
        vertices.sort();
        vertices.dedup();
        self.finite = Some(Arc::new(vertices));
        self
    }

    pub fn with_structure(mut self, structure: Structure) -> Self {
        self.structure = structure;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Renames the letters; the count must match.
    pub fn with_letters(mut self, letters: Vec<String>) -> Result<Self> {
        if letters.len() != self.letters.len() {
            return Err(Error::InvalidParameter(format!(
                "{} letter names given for an alphabet of size {}",
                letters.len(),
                self.letters.len()
            )));
        }
        let distinct: HashSet<&String> = letters.iter().collect();
        if distinct.len() != letters.len() {
            return Err(Error::AlphabetCollision(format!("{letters:?}")));
        }
        self.letters = letters;
        Ok(self)
    }

    /// Restricts the universe to vertices satisfying `window`.
    pub fn with_window(mut self, window: Membership) -> Self {
        let inner = self.contains.clone();
        self.contains = Arc::new(move |v| inner(v) && window(v));
        if let Some(list) = &self.finite {
            let kept: Vec<Vertex> = list.iter().filter(|v| (self.contains)(v)).cloned().collect();
            self.finite = Some(Arc::new(kept));
        }
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    /// Alphabet size `k`; the graph is 2k-regular counting implicit loops.
    pub fn alphabet_size(&self) -> usize {
        self.letters.len()
    }

    pub fn root(&self) -> &Vertex {
        &self.root
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn finite_vertices(&self) -> Option<&[Vertex]> {
        self.finite.as_ref().map(|v| v.as_slice())
    }

    pub fn explicit_edges(&self) -> Option<&ExplicitEdges> {
        self.explicit.as_deref()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        (self.contains)(v)
    }

    pub(crate) fn membership(&self) -> Membership {
        self.contains.clone()
    }

    pub(crate) fn raw_action(&self, generator: usize) -> ActionFn {
        self.actions[generator - 1].clone()
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l == name).map(|i| i + 1)
    }

    /// Image of `v` under `letter`. Leaving a finite window is an error, never a truncation.
    pub fn letter_action(&self, v: &Vertex, letter: Letter) -> Result<Vertex> {
        if letter.generator == 0 || letter.generator > self.letters.len() {
            return Err(Error::InvalidParameter(format!(
                "letter index {} out of range 1..={}",
                letter.generator,
                self.letters.len()
            )));
        }
        if !self.contains(v) {
            return Err(Error::WindowOverflow(format!("vertex {v} outside the universe of {}", self.name)));
        }
        let image = (self.actions[letter.generator - 1])(v, letter.sign);
        if !self.contains(&image) {
            return Err(Error::WindowOverflow(format!(
                "{} maps {v} to {image}, outside the window of {}",
                self.format_letter(letter),
                self.name
            )));
        }
        Ok(image)
    }

    /// Action of a word `w = l_1 ... l_n`: the last letter is applied first.
    pub fn word_action(&self, v: &Vertex, word: &[Letter]) -> Result<Vertex> {
        let mut x = v.clone();
        for &l in word.iter().rev() {
            x = self.letter_action(&x, l)?;
        }
        Ok(x)
    }

    pub fn format_letter(&self, l: Letter) -> String {
        let name = self.letters.get(l.generator.wrapping_sub(1)).cloned().unwrap_or_else(|| format!("#{}", l.generator));
        match l.sign {
            Sign::Pos => name,
            Sign::Neg => format!("{name}^-1"),
        }
    }

    pub fn format_word(&self, word: &[Letter]) -> String {
        word.iter().map(|&l| self.format_letter(l)).collect::<Vec<_>>().join(".")
    }

    /// Parses `a.b^-1.c` (dots or whitespace between letters).
    pub fn parse_word(&self, text: &str) -> Result<Vec<Letter>> {
        text.split(|c: char| c == '.' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|tok| {
                let (name, sign) = match tok.strip_suffix("^-1") {
                    Some(n) => (n, Sign::Neg),
                    None => (tok, Sign::Pos),
                };
                self.letter_index(name)
                    .map(|generator| Letter { generator, sign })
                    .ok_or_else(|| Error::Parse(format!("unknown letter `{name}` in {}", self.name)))
            })
            .collect()
    }

    /// Non-loop neighbours of `v`, over all letters and both signs.
    pub fn neighbours(&self, v: &Vertex) -> Result<Vec<Vertex>> {
        let mut out = Vec::with_capacity(2 * self.letters.len());
        for g in 1..=self.letters.len() {
            for sign in [Sign::Pos, Sign::Neg] {
                let w = self.letter_action(v, Letter { generator: g, sign })?;
                if w != *v {
                    out.push(w);
                }
            }
        }
        Ok(out)
    }
}

/// Exact BFS ball with vertices sorted by `(distance, canonical order)`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BallEnumeration {
    pub center: Vertex,
    pub radius: usize,
    pub vertices: Vec<Vertex>,
    pub distances: Vec<usize>,
    /// `volumes[t] = |B(center, t)|`.
    pub volumes: Vec<usize>,
}

impl BallEnumeration {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn volume(&self, t: usize) -> usize {
        self.volumes[t.min(self.radius)]
    }

    pub fn index(&self) -> HashMap<Vertex, usize> {
        self.vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect()
    }

    pub fn distance_of(&self, v: &Vertex) -> Option<usize> {
        self.vertices.iter().position(|w| w == v).map(|i| self.distances[i])
    }
}

pub fn enumerate_ball(graph: &LabelledGraph, center: &Vertex, radius: usize) -> Result<BallEnumeration> {
    if !graph.contains(center) {
        return Err(Error::WindowOverflow(format!("center {center} outside the universe")));
    }
    let mut seen: HashSet<Vertex> = HashSet::new();
    seen.insert(center.clone());
    let mut vertices = vec![center.clone()];
    let mut distances = vec![0];
    let mut volumes = vec![1];
    let mut layer = vec![center.clone()];
    for t in 1..=radius {
        let mut next = Vec::new();
        for v in &layer {
            for w in graph.neighbours(v)? {
                if seen.insert(w.clone()) {
                    next.push(w);
                }
            }
        }
        next.sort();
        for v in &next {
            vertices.push(v.clone());
            distances.push(t);
        }
        volumes.push(vertices.len());
        layer = next;
    }
    Ok(BallEnumeration { center: center.clone(), radius, vertices, distances, volumes })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// Two window vertices share an image, or a letter has several edges at one vertex.
    NonInjectiveAction { letter: String, vertex: String },
    InverseMismatch { letter: String, vertex: String },
    ActionError { letter: String, vertex: String, message: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonInjectiveAction { letter, vertex } => {
                write!(f, "non-injective action of {letter} at {vertex}")
            }
            Violation::InverseMismatch { letter, vertex } => {
                write!(f, "inverse of {letter} does not undo it at {vertex}")
            }
            Violation::ActionError { letter, vertex, message } => {
                write!(f, "{letter} at {vertex}: {message}")
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ValidationReport {
    pub alphabet_size: usize,
    pub degree: usize,
    pub checked_vertices: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks bijectivity and inverse consistency of every letter on the ball interior.
pub fn validate(graph: &LabelledGraph, window: &BallEnumeration) -> ValidationReport {
    let mut violations = Vec::new();
    let interior: Vec<&Vertex> = window
        .vertices
        .iter()
        .zip(&window.distances)
        .filter(|(_, &d)| d < window.radius || window.radius == 0)
        .map(|(v, _)| v)
        .collect();
    for g in 1..=graph.alphabet_size() {
        for sign in [Sign::Pos, Sign::Neg] {
            let letter = Letter { generator: g, sign };
            let lname = graph.format_letter(letter);
            let mut images: HashMap<Vertex, &Vertex> = HashMap::new();
            for &v in &interior {
                let image = match graph.letter_action(v, letter) {
                    Ok(w) => w,
                    Err(e) => {
                        violations.push(Violation::ActionError {
                            letter: lname.clone(),
                            vertex: v.to_string(),
                            message: e.to_string(),
                        });
                        continue;
                    }
                };
                if let Some(prev) = images.insert(image.clone(), v) {
                    let _ = prev;
                    violations.push(Violation::NonInjectiveAction { letter: lname.clone(), vertex: image.to_string() });
                }
                match graph.letter_action(&image, letter.inverse()) {
                    Ok(back) if back == *v => {}
                    Ok(_) => violations.push(Violation::InverseMismatch { letter: lname.clone(), vertex: v.to_string() }),
                    Err(e) => violations.push(Violation::ActionError {
                        letter: graph.format_letter(letter.inverse()),
                        vertex: image.to_string(),
                        message: e.to_string(),
                    }),
                }
            }
        }
    }
    if let Some(explicit) = graph.explicit_edges() {
        for (i, edges) in explicit.per_letter.iter().enumerate() {
            let lname = graph.letters()[i].clone();
            let mut out: BTreeMap<&Vertex, usize> = BTreeMap::new();
            let mut inc: BTreeMap<&Vertex, usize> = BTreeMap::new();
            for (a, b) in edges {
                *out.entry(a).or_default() += 1;
                *inc.entry(b).or_default() += 1;
            }
            for (v, c) in out.iter().chain(inc.iter()) {
                if *c > 1 {
                    violations.push(Violation::NonInjectiveAction { letter: lname.clone(), vertex: v.to_string() });
                }
            }
        }
    }
    violations.sort_by_key(|v| v.to_string());
    violations.dedup();
    ValidationReport {
        alphabet_size: graph.alphabet_size(),
        degree: 2 * graph.alphabet_size(),
        checked_vertices: interior.len(),
        violations,
    }
}

/// Validates on the ball of the given radius around the root.
pub fn validate_around_root(graph: &LabelledGraph, radius: usize) -> Result<ValidationReport> {
    let ball = enumerate_ball(graph, graph.root(), radius)?;
    Ok(validate(graph, &ball))
}

/// Labelled Cayley graph of `base` for the generators; each letter acts by `x -> s x`.
///
/// `window` bounds coordinates of infinite bases (`|n| <= window`).
pub fn build_cayley(base: BaseGroup, generators: Vec<Vertex>, window: Option<i64>) -> Result<LabelledGraph> {
    if generators.is_empty() {
        return Err(Error::InvalidParameter("at least one generator is required".into()));
    }
    for g in &generators {
        if !base.contains(g) {
            return Err(Error::MalformedGroup(format!("generator {g} is not an element of {}", base.describe())));
        }
    }
    let letters: Vec<String> = if generators.len() == 1 {
        vec!["s".to_string()]
    } else {
        (1..=generators.len()).map(|i| format!("s{i}")).collect()
    };
    let actions: Vec<ActionFn> = generators
        .iter()
        .map(|g| {
            let base = base.clone();
            let g = g.clone();
            let ginv = base.inv(&g);
            Arc::new(move |x: &Vertex, s: Sign| {
                let h = if s == Sign::Pos { &g } else { &ginv };
                base.mul(h, x)
            }) as ActionFn
        })
        .collect();
    let membership: Membership = {
        let base = base.clone();
        Arc::new(move |v| base.contains(v))
    };
    let mut graph = LabelledGraph::new(
        format!("cayley({})", base.describe()),
        letters,
        actions,
        base.identity(),
        membership,
    );
    if let Some(elements) = base.elements() {
        graph = graph.with_finite_universe(elements);
    }
    if let Some(w) = window {
        graph = graph.with_window(Arc::new(move |v| match v {
            Vertex::Int(n) => n.abs() <= w,
            Vertex::Lattice(c) => c.iter().all(|x| x.abs() <= w),
            _ => true,
        }));
    }
    Ok(graph.with_structure(Structure::Cayley { base, generators }))
}

/// The standard generators: `+1` for ℤ and ℤ/b, unit vectors for ℤᵈ, all non-identity elements for tables.
pub fn standard_generators(base: &BaseGroup) -> Vec<Vertex> {
    match base {
        BaseGroup::Integers => vec![Vertex::Int(1)],
        BaseGroup::Cyclic(_) => vec![Vertex::Residue(1)],
        BaseGroup::Lattice(d) => (0..*d)
            .map(|i| {
                let mut v = vec![0; *d];
                v[i] = 1;
                Vertex::Lattice(v)
            })
            .collect(),
        BaseGroup::Table(t) => (0..t.order() as u32)
            .filter(|&i| i != t.identity_index())
            .map(Vertex::FiniteElem)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_encoding_roundtrip() {
        let vs = vec![
            Vertex::Root,
            Vertex::Star,
            Vertex::Int(-3),
            Vertex::Residue(2),
            Vertex::Lattice(vec![1, -2]),
            Vertex::FiniteElem(5),
            Vertex::Ray { ray: 2, depth: 7 },
            Vertex::bubble(&[1, 2], 5),
            Vertex::bubble(&[], 0),
            Vertex::glued(1, Vertex::glued(0, Vertex::Int(4))),
        ];
        for v in vs {
            let back: Vertex = v.to_string().parse().unwrap();
            assert_eq!(back, v);
        }
        assert!("q7".parse::<Vertex>().is_err());
    }

    #[test]
    fn letter_inverse_is_involution() {
        let l = Letter::pos(3);
        assert_eq!(l.inverse().inverse(), l);
        assert_eq!(l.inverse().generator, 3);
        assert_eq!(l.inverse().sign, Sign::Neg);
    }

    #[test]
    fn integer_cayley_graph() {
        let g = build_cayley(BaseGroup::Integers, vec![Vertex::Int(1)], None).unwrap();
        assert_eq!(g.letter_action(&Vertex::Int(3), Letter::pos(1)).unwrap(), Vertex::Int(4));
        let ball = enumerate_ball(&g, &Vertex::Int(0), 3).unwrap();
        assert_eq!(ball.len(), 7);
        assert_eq!(ball.volumes, vec![1, 3, 5, 7]);
        assert!(validate(&g, &ball).is_valid());
    }

    #[test]
    fn cyclic_cayley_graph() {
        let g = build_cayley(BaseGroup::Cyclic(3), vec![Vertex::Residue(1)], None).unwrap();
        assert_eq!(g.letter_action(&Vertex::Residue(2), Letter::pos(1)).unwrap(), Vertex::Residue(0));
        let ball = enumerate_ball(&g, &Vertex::Residue(0), 3).unwrap();
        assert_eq!(ball.volumes, vec![1, 3, 3, 3]);
        assert_eq!(g.finite_vertices().unwrap().len(), 3);
    }

    #[test]
    fn lattice_window() {
        let base = BaseGroup::Lattice(2);
        let g = build_cayley(base.clone(), standard_generators(&base), Some(4)).unwrap();
        let v = Vertex::Lattice(vec![4, 0]);
        assert!(matches!(g.letter_action(&v, Letter::pos(1)), Err(Error::WindowOverflow(_))));
        assert_eq!(g.letter_action(&v, Letter::pos(2)).unwrap(), Vertex::Lattice(vec![4, 1]));
        let ball = enumerate_ball(&g, &Vertex::Lattice(vec![0, 0]), 3).unwrap();
        assert_eq!(ball.volumes, vec![1, 5, 13, 25]);
        assert!(validate(&g, &ball).is_valid());
        assert!(enumerate_ball(&g, &Vertex::Lattice(vec![0, 0]), 9).is_err());
    }

    #[test]
    fn duplicate_edges_are_reported() {
        let vs = vec![Vertex::Int(0), Vertex::Int(1), Vertex::Int(2)];
        let edges = vec![(1, Vertex::Int(0), Vertex::Int(1)), (1, Vertex::Int(0), Vertex::Int(2))];
        let g = LabelledGraph::from_edges("bad", vs, vec!["l".into()], &edges, Vertex::Int(0)).unwrap();
        let ball = enumerate_ball(&g, &Vertex::Int(0), 2).unwrap();
        let report = validate(&g, &ball);
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NonInjectiveAction { vertex, .. } if vertex == "0")));
    }

    #[test]
    fn explicit_cycle_is_valid() {
        let vs: Vec<Vertex> = (0..4).map(Vertex::Int).collect();
        let edges: Vec<_> = (0..4).map(|i| (1, Vertex::Int(i), Vertex::Int((i + 1) % 4))).collect();
        let g = LabelledGraph::from_edges("c4", vs, vec!["a".into()], &edges, Vertex::Int(0)).unwrap();
        let ball = enumerate_ball(&g, &Vertex::Int(0), 2).unwrap();
        let report = validate(&g, &ball);
        assert!(report.is_valid(), "{:?}", report.violations);
        assert_eq!(report.degree, 2);
    }

    #[test]
    fn word_parsing_and_action() {
        let g = build_cayley(BaseGroup::Integers, vec![Vertex::Int(1)], None).unwrap();
        let w = g.parse_word("s.s.s^-1").unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(g.word_action(&Vertex::Int(0), &w).unwrap(), Vertex::Int(1));
        assert_eq!(g.format_word(&w), "s.s.s^-1");
        assert_eq!(inverse_word(&w), vec![Letter::pos(1), Letter::neg(1), Letter::neg(1)]);
        assert!(g.parse_word("q").is_err());
    }
}
