//! Graph-level constructions: gluing along identified vertices, rooted gluing,
//! pocket and star extensions, Houghton ray graphs.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::BaseGroup;
use crate::labelled_graph::{
    build_cayley, ActionFn, Component, Embed, LabelledGraph, Membership, Sign, Structure, Vertex,
};

pub type PartialMap = Arc<dyn Fn(&Vertex) -> Option<Vertex> + Send + Sync>;

/// Bijection `j` between `V₁ ⊂ X₁` and `V₂ ⊂ X₂`.
#[derive(Clone)]
pub enum Identification {
    /// Finitely many identified pairs `(x₁, x₂)`.
    Pairs(Vec<(Vertex, Vertex)>),
    /// Identification given by mutually inverse partial maps, for infinite `V₁`.
    Rule { forward: PartialMap, backward: PartialMap, description: String },
}

impl fmt::Debug for Identification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identification::Pairs(p) => f.debug_tuple("Pairs").field(p).finish(),
            Identification::Rule { description, .. } => write!(f, "Rule({description})"),
        }
    }
}

impl Identification {
    pub fn empty() -> Self {
        Identification::Pairs(Vec::new())
    }

    fn maps(&self) -> Result<(PartialMap, PartialMap)> {
        match self {
            Identification::Pairs(pairs) => {
                let mut fwd = HashMap::new();
                let mut bwd = HashMap::new();
                for (a, b) in pairs {
                    if fwd.insert(a.clone(), b.clone()).is_some() || bwd.insert(b.clone(), a.clone()).is_some() {
                        return Err(Error::NonBijective(format!("vertex repeated in pair ({a}, {b})")));
                    }
                }
                let (fwd, bwd) = (Arc::new(fwd), Arc::new(bwd));
                Ok((
                    Arc::new(move |v: &Vertex| fwd.get(v).cloned()) as PartialMap,
                    Arc::new(move |v: &Vertex| bwd.get(v).cloned()) as PartialMap,
                ))
            }
            Identification::Rule { forward, backward, .. } => Ok((forward.clone(), backward.clone())),
        }
    }
}

/// Two graphs with disjoint alphabets and an identification between vertex subsets.
#[derive(Clone, Debug)]
pub struct GluingSpec {
    pub left: LabelledGraph,
    pub right: LabelledGraph,
    pub identification: Identification,
}

fn check_disjoint(alphabets: &[&[String]]) -> Result<()> {
    let mut seen = HashSet::new();
    for a in alphabets {
        for l in a.iter() {
            if !seen.insert(l.clone()) {
                return Err(Error::AlphabetCollision(l.clone()));
            }
        }
    }
    Ok(())
}

/// Glues two labelled graphs along the identification.
///
/// Left vertices become `g0/x`; right vertices outside `V₂` become `g1/x`, and
/// `x₂ ∈ V₂` is named by its partner `g0/j⁻¹(x₂)`. The root is the left root.
pub fn glue(spec: GluingSpec) -> Result<LabelledGraph> {
    let GluingSpec { left, right, identification } = spec;
    check_disjoint(&[left.letters(), right.letters()])?;
    if let Identification::Pairs(pairs) = &identification {
        for (a, b) in pairs {
            if !left.contains(a) || !right.contains(b) {
                return Err(Error::NonBijective(format!("pair ({a}, {b}) is not in the two universes")));
            }
        }
    }
    let (fwd, bwd) = identification.maps()?;

    let wrap_left = |x: Vertex| Vertex::glued(0, x);
    let to_global_right = {
        let bwd = bwd.clone();
        move |y: Vertex| match bwd(&y) {
            Some(x) => Vertex::glued(0, x),
            None => Vertex::glued(1, y),
        }
    };
    let to_global_right = Arc::new(to_global_right);

    let mut actions: Vec<ActionFn> = Vec::new();
    for g in 1..=left.alphabet_size() {
        let act = left.raw_action(g);
        actions.push(Arc::new(move |v: &Vertex, s: Sign| match v {
            Vertex::Glued { component: 0, inner } => wrap_left(act(inner, s)),
            _ => v.clone(),
        }));
    }
    for g in 1..=right.alphabet_size() {
        let act = right.raw_action(g);
        let fwd = fwd.clone();
        let to_global = to_global_right.clone();
        actions.push(Arc::new(move |v: &Vertex, s: Sign| match v {
            Vertex::Glued { component: 1, inner } => to_global(act(inner, s)),
            Vertex::Glued { component: 0, inner } => match fwd(inner) {
                Some(y) => to_global(act(&y, s)),
                None => v.clone(),
            },
            _ => v.clone(),
        }));
    }
    let left_in = left.membership();
    let right_in = right.membership();
    let bwd_m = bwd.clone();
    let contains: Membership = Arc::new(move |v: &Vertex| match v {
        Vertex::Glued { component: 0, inner } => left_in(inner),
        Vertex::Glued { component: 1, inner } => right_in(inner) && bwd_m(inner).is_none(),
        _ => false,
    });
    let letters: Vec<String> = left.letters().iter().chain(right.letters()).cloned().collect();
    let mut out = LabelledGraph::new(
        format!("glue({}, {})", left.name(), right.name()),
        letters,
        actions,
        Vertex::glued(0, left.root().clone()),
        contains,
    );
    if let (Some(lv), Some(rv)) = (left.finite_vertices(), right.finite_vertices()) {
        let mut all: Vec<Vertex> = lv.iter().cloned().map(|x| Vertex::glued(0, x)).collect();
        all.extend(rv.iter().filter(|y| bwd(y).is_none()).cloned().map(|y| Vertex::glued(1, y)));
        out = out.with_finite_universe(all);
    }
    Ok(out)
}

/// Renames vertices through a bijection; `backward` must invert `forward`.
pub fn relabel(
    graph: &LabelledGraph,
    forward: Arc<dyn Fn(&Vertex) -> Vertex + Send + Sync>,
    backward: Arc<dyn Fn(&Vertex) -> Option<Vertex> + Send + Sync>,
    structure: Structure,
) -> LabelledGraph {
    let actions: Vec<ActionFn> = (1..=graph.alphabet_size())
        .map(|g| {
            let act = graph.raw_action(g);
            let (f, b) = (forward.clone(), backward.clone());
            Arc::new(move |v: &Vertex, s: Sign| match b(v) {
                Some(x) => f(&act(&x, s)),
                None => v.clone(),
            }) as ActionFn
        })
        .collect();
    let inner = graph.membership();
    let (f, b) = (forward.clone(), backward.clone());
    let contains: Membership = Arc::new(move |v: &Vertex| match b(v) {
        Some(x) => inner(&x) && f(&x) == *v,
        None => false,
    });
    let mut out = LabelledGraph::new(
        graph.name().to_string(),
        graph.letters().to_vec(),
        actions,
        forward(graph.root()),
        contains,
    );
    if let Some(vs) = graph.finite_vertices() {
        out = out.with_finite_universe(vs.iter().map(|x| forward(x)).collect());
    }
    out.with_structure(structure)
}

fn component_of(graph: &LabelledGraph, embed: Embed) -> Option<Component> {
    match graph.structure() {
        Structure::Cayley { base, generators } => {
            Some(Component { base: base.clone(), generators: generators.clone(), embed })
        }
        _ => None,
    }
}

/// Rooted gluing with explicit embeddings. Component 0 must be `Embed::Native`.
pub fn rooted_gluing_with(components: Vec<LabelledGraph>, embeds: Vec<Embed>) -> Result<LabelledGraph> {
    if components.len() < 2 {
        return Err(Error::InvalidParameter("rooted gluing needs at least two components".into()));
    }
    if embeds.len() != components.len() || embeds[0] != Embed::Native {
        return Err(Error::InvalidParameter("component 0 must keep its native vertices".into()));
    }
    let alphabets: Vec<&[String]> = components.iter().map(|c| c.letters()).collect();
    check_disjoint(&alphabets)?;
    let root = components[0].root().clone();
    for (c, e) in embeds.iter().enumerate().skip(1) {
        match e {
            Embed::Native => {
                return Err(Error::InvalidParameter(format!("component {c} cannot be native")));
            }
            Embed::StarPoint => {
                let g = &components[c];
                let ok = g.finite_vertices().map(|v| v.len() == 2).unwrap_or(false);
                if !ok || components[0].contains(&Vertex::Star) {
                    return Err(Error::InvalidParameter("star point needs a two-vertex component".into()));
                }
            }
            Embed::Namespaced(_) => {}
        }
    }

    // Local <-> global vertex maps per component.
    type Map = Arc<dyn Fn(&Vertex) -> Option<Vertex> + Send + Sync>;
    let mut to_local: Vec<Map> = Vec::new();
    let mut to_global: Vec<Arc<dyn Fn(&Vertex) -> Vertex + Send + Sync>> = Vec::new();
    let mut members: Vec<Membership> = Vec::new();
    for (c, (g, e)) in components.iter().zip(&embeds).enumerate() {
        let local_root = g.root().clone();
        let star_partner = match e {
            Embed::StarPoint => g.finite_vertices().unwrap().iter().find(|v| **v != local_root).cloned(),
            _ => None,
        };
        let root_l = root.clone();
        let member = g.membership();
        let e = *e;
        let lr = local_root.clone();
        let sp = star_partner.clone();
        let c32 = c as u32;
        let member_l = member.clone();
        to_local.push(Arc::new(move |x: &Vertex| {
            if *x == root_l {
                return Some(lr.clone());
            }
            match e {
                Embed::Native => match x {
                    Vertex::Glued { component, .. } if *component >= 1 => None,
                    Vertex::Star => None,
                    _ => member_l(x).then(|| x.clone()),
                },
                Embed::Namespaced(_) => match x {
                    Vertex::Glued { component, inner } if *component == c32 => Some((**inner).clone()),
                    _ => None,
                },
                Embed::StarPoint => (*x == Vertex::Star).then(|| sp.clone().unwrap()),
            }
        }));
        let root_g = root.clone();
        let lr = local_root.clone();
        to_global.push(Arc::new(move |v: &Vertex| {
            if *v == lr {
                return root_g.clone();
            }
            match e {
                Embed::Native => v.clone(),
                Embed::Namespaced(_) => Vertex::glued(c32, v.clone()),
                Embed::StarPoint => Vertex::Star,
            }
        }));
        members.push(member);
    }

    let mut actions: Vec<ActionFn> = Vec::new();
    let mut letters = Vec::new();
    for (c, g) in components.iter().enumerate() {
        for l in 1..=g.alphabet_size() {
            let act = g.raw_action(l);
            let (tl, tg) = (to_local[c].clone(), to_global[c].clone());
            actions.push(Arc::new(move |v: &Vertex, s: Sign| match tl(v) {
                Some(x) => tg(&act(&x, s)),
                None => v.clone(),
            }));
        }
        letters.extend(g.letters().iter().cloned());
    }
    let tls = to_local.clone();
    let contains: Membership = Arc::new(move |v: &Vertex| tls.iter().any(|tl| tl(v).is_some()));
    let name = format!(
        "rooted({})",
        components.iter().map(|c| c.name().to_string()).collect::<Vec<_>>().join(", ")
    );
    let mut out = LabelledGraph::new(name, letters, actions, root, contains);

    if components.iter().all(|c| c.finite_vertices().is_some()) {
        let mut all = Vec::new();
        for (c, g) in components.iter().enumerate() {
            all.extend(g.finite_vertices().unwrap().iter().map(|v| to_global[c](v)));
        }
        out = out.with_finite_universe(all);
    }
    let comps: Option<Vec<Component>> =
        components.iter().zip(&embeds).map(|(g, e)| component_of(g, *e)).collect();
    if let Some(comps) = comps {
        out = out.with_structure(Structure::Rooted(comps));
    }
    Ok(out)
}

/// Identifies the roots of the components. Component 0 keeps its vertex names;
/// component `c ≥ 1` is namespaced as `gc/…`.
pub fn rooted_gluing(components: Vec<LabelledGraph>) -> Result<LabelledGraph> {
    let embeds = (0..components.len())
        .map(|c| if c == 0 { Embed::Native } else { Embed::Namespaced(c as u32) })
        .collect();
    rooted_gluing_with(components, embeds)
}

/// Adds a point `*` and a letter `tau` transposing `*` with the root.
pub fn pocket_extension(graph: LabelledGraph) -> Result<LabelledGraph> {
    let pocket = build_cayley(BaseGroup::Cyclic(2), vec![Vertex::Residue(1)], None)?
        .with_letters(vec!["tau".into()])?;
    let name = format!("pocket({})", graph.name());
    Ok(rooted_gluing_with(vec![graph, pocket], vec![Embed::Native, Embed::StarPoint])?.with_name(name))
}

/// `Γ(β, G)`: glues a cycle of length `b ∈ {2, 3}` with letter `beta` at the identity of a Cayley graph.
pub fn beta_extension(cayley: LabelledGraph, b: u32) -> Result<LabelledGraph> {
    if !(b == 2 || b == 3) {
        return Err(Error::InvalidParameter(format!("beta must have order 2 or 3, got {b}")));
    }
    let cycle = build_cayley(BaseGroup::Cyclic(b), vec![Vertex::Residue(1)], None)?.with_letters(vec!["beta".into()])?;
    let name = format!("gamma(beta{b}, {})", cayley.name());
    Ok(rooted_gluing(vec![cayley, cycle])?.with_name(name))
}

/// Adds letters `t_i` transposing the identity with the generator `s_i`.
pub fn star_extension(cayley: LabelledGraph) -> Result<LabelledGraph> {
    let (base, generators) = match cayley.structure() {
        Structure::Cayley { base, generators } => (base.clone(), generators.clone()),
        _ => return Err(Error::InvalidParameter("star extension needs a Cayley graph".into())),
    };
    let k = generators.len();
    let mut letters = cayley.letters().to_vec();
    let new: Vec<String> = if k == 1 { vec!["t".into()] } else { (1..=k).map(|i| format!("t{i}")).collect() };
    for n in &new {
        if letters.contains(n) {
            return Err(Error::AlphabetCollision(n.clone()));
        }
    }
    letters.extend(new);
    let mut actions: Vec<ActionFn> = (1..=k).map(|g| cayley.raw_action(g)).collect();
    let id = base.identity();
    for s in &generators {
        let (a, b) = (id.clone(), s.clone());
        actions.push(Arc::new(move |v: &Vertex, _| {
            if *v == a {
                b.clone()
            } else if *v == b {
                a.clone()
            } else {
                v.clone()
            }
        }));
    }
    let mut out = LabelledGraph::new(
        format!("star({})", base.describe()),
        letters,
        actions,
        id,
        cayley.membership(),
    );
    if let Some(vs) = cayley.finite_vertices() {
        out = out.with_finite_universe(vs.to_vec());
    }
    Ok(out.with_structure(Structure::Star { base, generators }))
}

/// Houghton graph `Y_k` with letters `h_{i,j}` for the chosen pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoughtonSpec {
    pub rays: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl HoughtonSpec {
    /// Pairs `(1,2), (1,3), …, (1,k)`.
    pub fn standard(rays: usize) -> Self {
        HoughtonSpec { rays, pairs: (2..=rays).map(|j| (1, j)).collect() }
    }
}

/// Position of `v` on the line `R_i ∪ {o} ∪ R_j` (`R_i` negative), if it lies there.
pub fn line_coordinate(v: &Vertex, i: usize, j: usize) -> Option<i64> {
    match v {
        Vertex::Root => Some(0),
        Vertex::Ray { ray, depth } if *ray as usize == i => Some(-(*depth as i64)),
        Vertex::Ray { ray, depth } if *ray as usize == j => Some(*depth as i64),
        _ => None,
    }
}

pub fn line_point(x: i64, i: usize, j: usize) -> Vertex {
    match x.cmp(&0) {
        std::cmp::Ordering::Equal => Vertex::Root,
        std::cmp::Ordering::Less => Vertex::ray(i as u32, x.unsigned_abs()),
        std::cmp::Ordering::Greater => Vertex::ray(j as u32, x as u64),
    }
}

/// Translation by `m` along the line through `R_i` and `R_j`; other points are fixed.
pub fn shift_along(v: &Vertex, i: usize, j: usize, m: i64) -> Vertex {
    match line_coordinate(v, i, j) {
        Some(x) => line_point(x + m, i, j),
        None => v.clone(),
    }
}

fn ray_membership(rays: usize, window: Option<u64>) -> Membership {
    Arc::new(move |v: &Vertex| match v {
        Vertex::Root => true,
        Vertex::Ray { ray, depth } => {
            *ray >= 1 && (*ray as usize) <= rays && *depth >= 1 && window.map_or(true, |w| *depth <= w)
        }
        _ => false,
    })
}

pub fn build_houghton(spec: &HoughtonSpec, window: Option<u64>) -> Result<LabelledGraph> {
    let k = spec.rays;
    if k < 3 {
        return Err(Error::InvalidParameter(format!("Houghton graph needs k >= 3 rays, got {k}")));
    }
    let mut covered = vec![false; k + 1];
    for &(i, j) in &spec.pairs {
        if i == 0 || j == 0 || i > k || j > k || i == j {
            return Err(Error::InvalidParameter(format!("bad ray pair ({i}, {j})")));
        }
        covered[i] = true;
        covered[j] = true;
    }
    if covered[1..].iter().any(|c| !c) {
        return Err(Error::InvalidParameter("every ray must appear in some pair".into()));
    }
    let letters = spec.pairs.iter().map(|(i, j)| format!("h{i}{j}")).collect();
    let actions = spec
        .pairs
        .iter()
        .map(|&(i, j)| {
            Arc::new(move |v: &Vertex, s: Sign| shift_along(v, i, j, if s == Sign::Pos { 1 } else { -1 })) as ActionFn
        })
        .collect();
    Ok(LabelledGraph::new(format!("houghton{k}"), letters, actions, Vertex::Root, ray_membership(k, window))
        .with_structure(Structure::Houghton { rays: k }))
}

fn integer_copy(letter: &str) -> Result<LabelledGraph> {
    build_cayley(BaseGroup::Integers, vec![Vertex::Int(1)], None)?.with_letters(vec![letter.to_string()])
}

fn nonpositive_rule() -> Identification {
    let f: PartialMap = Arc::new(|v: &Vertex| match v {
        Vertex::Int(n) if *n <= 0 => Some(v.clone()),
        _ => None,
    });
    Identification::Rule { forward: f.clone(), backward: f, description: "n <-> n for n <= 0".into() }
}

/// Two copies of ℤ (letters `t1`, `t2`) glued along their nonpositive halves, with
/// vertices renamed onto rays: `R1` is where `t1` acts trivially, `R2` where `t2`
/// does, `R3` the shared branch.
pub fn houghton_tripod(window: Option<u64>) -> Result<LabelledGraph> {
    let glued = glue(GluingSpec {
        left: integer_copy("t1")?,
        right: integer_copy("t2")?,
        identification: nonpositive_rule(),
    })?;
    let forward = Arc::new(|v: &Vertex| match v {
        Vertex::Glued { component: 0, inner } => match **inner {
            Vertex::Int(n) if n > 0 => Vertex::ray(2, n as u64),
            Vertex::Int(n) => Vertex::ray(3, n.unsigned_abs()),
            _ => v.clone(),
        },
        Vertex::Glued { component: 1, inner } => match **inner {
            Vertex::Int(n) => Vertex::ray(1, n as u64),
            _ => v.clone(),
        },
        _ => v.clone(),
    });
    let backward = Arc::new(|v: &Vertex| match v {
        Vertex::Root => Some(Vertex::glued(0, Vertex::Int(0))),
        Vertex::Ray { ray: 1, depth } => Some(Vertex::glued(1, Vertex::Int(*depth as i64))),
        Vertex::Ray { ray: 2, depth } => Some(Vertex::glued(0, Vertex::Int(*depth as i64))),
        Vertex::Ray { ray: 3, depth } => Some(Vertex::glued(0, Vertex::Int(-(*depth as i64)))),
        _ => None,
    });
    let g = relabel(&glued, forward, backward, Structure::Houghton { rays: 3 }).with_name("tripod");
    Ok(match window {
        Some(w) => g.with_window(ray_membership(3, Some(w))),
        None => g,
    })
}

/// The tripod with a third copy of ℤ (letter `t3`) glued on: `0` to the centre,
/// `n > 0` to depth `n` on `R1`, `n < 0` to depth `-n` on `R2`.
pub fn houghton_tripod_three(window: Option<u64>) -> Result<LabelledGraph> {
    let tripod = houghton_tripod(None)?;
    let f: PartialMap = Arc::new(|v: &Vertex| match v {
        Vertex::Root => Some(Vertex::Int(0)),
        Vertex::Ray { ray: 1, depth } => Some(Vertex::Int(*depth as i64)),
        Vertex::Ray { ray: 2, depth } => Some(Vertex::Int(-(*depth as i64))),
        _ => None,
    });
    let b: PartialMap = Arc::new(|v: &Vertex| match v {
        Vertex::Int(0) => Some(Vertex::Root),
        Vertex::Int(n) if *n > 0 => Some(Vertex::ray(1, *n as u64)),
        Vertex::Int(n) => Some(Vertex::ray(2, n.unsigned_abs())),
        _ => None,
    });
    let glued = glue(GluingSpec {
        left: tripod,
        right: integer_copy("t3")?,
        identification: Identification::Rule { forward: f, backward: b, description: "third copy".into() },
    })?;
    let forward = Arc::new(|v: &Vertex| match v {
        Vertex::Glued { component: 0, inner } => (**inner).clone(),
        _ => v.clone(),
    });
    let backward = Arc::new(|v: &Vertex| Some(Vertex::glued(0, v.clone())));
    let g = relabel(&glued, forward, backward, Structure::Houghton { rays: 3 }).with_name("tripod3");
    Ok(match window {
        Some(w) => g.with_window(ray_membership(3, Some(w))),
        None => g,
    })
}

/// Three copies of ℤ glued along a length-one tripod centred at `0` (six linear ends).
pub fn six_ended_tripod() -> Result<LabelledGraph> {
    let first = glue(GluingSpec {
        left: integer_copy("t1")?,
        right: integer_copy("t2")?,
        identification: Identification::Pairs(vec![
            (Vertex::Int(-1), Vertex::Int(-1)),
            (Vertex::Int(0), Vertex::Int(0)),
        ]),
    })?;
    glue(GluingSpec {
        left: first,
        right: integer_copy("t3")?,
        identification: Identification::Pairs(vec![
            (Vertex::glued(0, Vertex::Int(0)), Vertex::Int(0)),
            (Vertex::glued(0, Vertex::Int(1)), Vertex::Int(-1)),
            (Vertex::glued(1, Vertex::Int(1)), Vertex::Int(1)),
        ]),
    })
    .map(|g| g.with_name("six-ended"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labelled_graph::{enumerate_ball, validate, Letter};

    #[test]
    fn houghton_generator_action() {
        let g = build_houghton(&HoughtonSpec::standard(3), Some(20)).unwrap();
        let h12 = Letter::pos(1);
        assert_eq!(g.letter_action(&Vertex::ray(1, 1), h12).unwrap(), Vertex::Root);
        assert_eq!(g.letter_action(&Vertex::Root, h12).unwrap(), Vertex::ray(2, 1));
        assert_eq!(g.letter_action(&Vertex::ray(3, 4), h12).unwrap(), Vertex::ray(3, 4));
        assert!(g.letter_action(&Vertex::ray(2, 20), h12).is_err());
        let ball = enumerate_ball(&g, &Vertex::Root, 5).unwrap();
        assert_eq!(ball.volume(5), 16);
        assert!(validate(&g, &ball).is_valid());
    }

    #[test]
    fn pocket_of_integers() {
        let z = build_cayley(BaseGroup::Integers, vec![Vertex::Int(1)], None).unwrap();
        let p = pocket_extension(z).unwrap();
        assert_eq!(p.letters(), &["s".to_string(), "tau".to_string()]);
        assert_eq!(p.letter_action(&Vertex::Star, Letter::pos(2)).unwrap(), Vertex::Int(0));
        assert_eq!(p.letter_action(&Vertex::Int(0), Letter::pos(2)).unwrap(), Vertex::Star);
        assert_eq!(p.letter_action(&Vertex::Int(3), Letter::pos(2)).unwrap(), Vertex::Int(3));
        assert_eq!(p.letter_action(&Vertex::Star, Letter::pos(1)).unwrap(), Vertex::Star);
    }

    #[test]
    fn pocket_of_cyclic_is_finite_and_valid() {
        let z3 = build_cayley(BaseGroup::Cyclic(3), vec![Vertex::Residue(1)], None).unwrap();
        let p = pocket_extension(z3).unwrap();
        assert_eq!(p.finite_vertices().unwrap().len(), 4);
        let ball = enumerate_ball(&p, p.root(), 4).unwrap();
        let report = validate(&p, &ball);
        assert!(report.is_valid());
        assert_eq!(report.degree, 4);
    }

    #[test]
    fn empty_gluing_is_disjoint_union() {
        let a = integer_copy("a").unwrap();
        let b = integer_copy("b").unwrap();
        let g = glue(GluingSpec { left: a, right: b, identification: Identification::empty() }).unwrap();
        let x = Vertex::glued(1, Vertex::Int(5));
        assert_eq!(g.letter_action(&x, Letter::pos(1)).unwrap(), x);
        assert_eq!(g.letter_action(&x, Letter::pos(2)).unwrap(), Vertex::glued(1, Vertex::Int(6)));
        let ball = enumerate_ball(&g, g.root(), 3).unwrap();
        assert!(validate(&g, &ball).is_valid());
        assert_eq!(ball.len(), 7);
    }

    #[test]
    fn collisions_and_bad_identifications() {
        let a = integer_copy("s").unwrap();
        let b = integer_copy("s").unwrap();
        assert!(matches!(
            glue(GluingSpec { left: a.clone(), right: b, identification: Identification::empty() }),
            Err(Error::AlphabetCollision(_))
        ));
        let c = integer_copy("t").unwrap();
        let pairs = vec![(Vertex::Int(0), Vertex::Int(0)), (Vertex::Int(1), Vertex::Int(0))];
        assert!(matches!(
            glue(GluingSpec { left: a, right: c, identification: Identification::Pairs(pairs) }),
            Err(Error::NonBijective(_))
        ));
    }

    #[test]
    fn six_ended_volume() {
        let g = six_ended_tripod().unwrap();
        let ball = enumerate_ball(&g, g.root(), 6).unwrap();
        for r in 1..=6 {
            assert_eq!(ball.volume(r), 6 * r - 2);
        }
        assert!(validate(&g, &ball).is_valid());
    }

    #[test]
    fn star_of_integers() {
        let z = build_cayley(BaseGroup::Integers, vec![Vertex::Int(1)], None).unwrap();
        let s = star_extension(z).unwrap();
        assert_eq!(s.letters(), &["s".to_string(), "t".to_string()]);
        assert_eq!(s.letter_action(&Vertex::Int(0), Letter::pos(2)).unwrap(), Vertex::Int(1));
        assert_eq!(s.letter_action(&Vertex::Int(1), Letter::neg(2)).unwrap(), Vertex::Int(0));
        assert_eq!(s.letter_action(&Vertex::Int(2), Letter::pos(2)).unwrap(), Vertex::Int(2));
    }

    #[test]
    fn tripod_rays() {
        let g = houghton_tripod(Some(30)).unwrap();
        let ball = enumerate_ball(&g, &Vertex::Root, 4).unwrap();
        assert_eq!(ball.volume(4), 13);
        assert!(validate(&g, &ball).is_valid());
        // t1 moves R3 towards o and R2 away; R1 is fixed.
        assert_eq!(g.letter_action(&Vertex::ray(3, 1), Letter::pos(1)).unwrap(), Vertex::Root);
        assert_eq!(g.letter_action(&Vertex::Root, Letter::pos(1)).unwrap(), Vertex::ray(2, 1));
        assert_eq!(g.letter_action(&Vertex::ray(1, 2), Letter::pos(1)).unwrap(), Vertex::ray(1, 2));
    }
}
