//! Named groups understood by the command line.
//!
//! Grammar:
//!
//! ```text
//! base   := z | z<b> | lattice<d>
//! group  := base | pocket-<base> | star-<base> | gamma-beta-<b> | rooted-<base>-<base>[-<base>...]
//!         | houghton-<k> | bubble-<a1>-<a2>[-...] | pocket-bubble-<a1>-... | a<N>
//! ```

use piecewise::alternating::AlternatingModel;
use piecewise::bubble::{build_bubble, BubbleModel, BubbleSpec};
use piecewise::gluing::{beta_extension, build_houghton, pocket_extension, rooted_gluing, star_extension, HoughtonSpec};
use piecewise::group::DensePerm;
use piecewise::labelled_graph::{build_cayley, standard_generators};
use piecewise::walk::{make_measure_q, Measure};
use piecewise::{BaseGroup, Error, GluedGroup, Group, GroupElement, LabelledGraph, PermGroup, Result, Scalar};

/// A parsed group together with the data needed to build its step measure.
pub enum Handle {
    Glued(GluedGroup),
    Bubble(BubbleModel),
    Alternating(AlternatingModel),
}

impl Handle {
    pub fn name(&self) -> String {
        match self {
            Handle::Glued(g) => g.name(),
            Handle::Bubble(m) => m.spec.describe(),
            Handle::Alternating(m) => format!("A{}", m.n),
        }
    }

    /// Labelled graph underlying the group, when there is one.
    pub fn graph(&self) -> Result<LabelledGraph> {
        match self {
            Handle::Glued(g) => Ok(g.graph().clone()),
            Handle::Bubble(m) => build_bubble(&m.spec),
            Handle::Alternating(m) => {
                Err(Error::Unsupported(format!("A{} is given by its 3-cycles, not a labelled graph", m.n)))
            }
        }
    }
}

pub fn parse_base(s: &str) -> Result<BaseGroup> {
    if s == "z" {
        return Ok(BaseGroup::Integers);
    }
    if let Some(d) = s.strip_prefix("lattice") {
        let d: usize = d.parse().map_err(|_| Error::Parse(format!("bad lattice rank in `{s}`")))?;
        if d == 0 {
            return Err(Error::InvalidParameter("lattice rank must be positive".into()));
        }
        return Ok(BaseGroup::Lattice(d));
    }
    if let Some(b) = s.strip_prefix('z') {
        let b: u32 = b.parse().map_err(|_| Error::Parse(format!("bad base group `{s}`")))?;
        return BaseGroup::cyclic(b);
    }
    Err(Error::Parse(format!("unknown base group `{s}`")))
}

pub fn cayley(base: BaseGroup) -> Result<LabelledGraph> {
    let gens = standard_generators(&base);
    build_cayley(base, gens, None)
}

fn suffix_letters(graph: LabelledGraph, c: usize) -> Result<LabelledGraph> {
    if c == 0 {
        return Ok(graph);
    }
    let letters = graph.letters().iter().map(|l| format!("{l}_{c}")).collect();
    graph.with_letters(letters)
}

/// Rooted gluing of Cayley graphs of the given bases; letters of component `c ≥ 1` get suffix `_c`.
pub fn rooted(bases: &[BaseGroup]) -> Result<LabelledGraph> {
    if bases.len() < 2 {
        return Err(Error::InvalidParameter("a rooted gluing needs at least two components".into()));
    }
    let comps = bases
        .iter()
        .enumerate()
        .map(|(c, b)| suffix_letters(cayley(b.clone())?, c))
        .collect::<Result<Vec<_>>>()?;
    rooted_gluing(comps)
}

fn parse_sequence(parts: &[&str]) -> Result<Vec<u64>> {
    parts
        .iter()
        .map(|p| p.parse::<u64>().map_err(|_| Error::Parse(format!("bad sequence entry `{p}`"))))
        .collect()
}

pub fn parse_group(name: &str) -> Result<Handle> {
    let glued = |g: LabelledGraph| Ok(Handle::Glued(GluedGroup::new(g)?));
    if let Some(rest) = name.strip_prefix("pocket-bubble-") {
        let a = parse_sequence(&rest.split('-').collect::<Vec<_>>())?;
        return Ok(Handle::Bubble(BubbleModel::new(BubbleSpec::new(a, true)?)?));
    }
    if let Some(rest) = name.strip_prefix("bubble-") {
        let a = parse_sequence(&rest.split('-').collect::<Vec<_>>())?;
        return Ok(Handle::Bubble(BubbleModel::new(BubbleSpec::new(a, false)?)?));
    }
    if let Some(rest) = name.strip_prefix("pocket-") {
        return glued(pocket_extension(cayley(parse_base(rest)?)?)?);
    }
    if let Some(rest) = name.strip_prefix("star-") {
        return glued(star_extension(cayley(parse_base(rest)?)?)?);
    }
    if let Some(rest) = name.strip_prefix("gamma-beta-") {
        let b: u32 = rest.parse().map_err(|_| Error::Parse(format!("bad beta order in `{name}`")))?;
        return glued(beta_extension(cayley(BaseGroup::Integers)?, b)?);
    }
    if let Some(rest) = name.strip_prefix("rooted-") {
        let bases = rest.split('-').map(parse_base).collect::<Result<Vec<_>>>()?;
        return glued(rooted(&bases)?);
    }
    if let Some(rest) = name.strip_prefix("houghton-") {
        let k: usize = rest.parse().map_err(|_| Error::Parse(format!("bad ray count in `{name}`")))?;
        if k < 2 {
            return Err(Error::InvalidParameter("houghton groups need at least 2 rays".into()));
        }
        return glued(build_houghton(&HoughtonSpec::standard(k), None)?);
    }
    if let Some(rest) = name.strip_prefix('a') {
        if let Ok(n) = rest.parse::<usize>() {
            return Ok(Handle::Alternating(AlternatingModel::new(n)?));
        }
    }
    glued(cayley(parse_base(name)?)?)
}

/// Default step measure on a glued group.
///
/// Rooted gluings get the average of the uniform generator measures of their components,
/// star extensions get `½(ν₁ + ν₂)`, everything else the uniform measure on `S ∪ S⁻¹`.
pub fn glued_measure<S: Scalar>(group: &GluedGroup) -> Result<Measure<GroupElement, S>> {
    if group.star_base().is_some() {
        let (nu1, nu2) = piecewise::test_functions::star_measures::<S>(group)?;
        return make_measure_q(group, &[nu1, nu2]);
    }
    if let Some(comps) = group.components() {
        if comps.len() > 1 {
            let mut parts = Vec::with_capacity(comps.len());
            for (c, comp) in comps.iter().enumerate() {
                let mut elems = Vec::new();
                for g in &comp.generators {
                    elems.push(group.embed_component(c, g)?);
                    elems.push(group.embed_component(c, &comp.base.inv(g))?);
                }
                elems.sort();
                elems.dedup();
                parts.push(Measure::uniform(group, elems)?);
            }
            return make_measure_q(group, &parts);
        }
    }
    Measure::uniform(group, group.symmetric_generators())
}

pub fn perm_measure<S: Scalar>(handle: &Handle) -> Result<(PermGroup, Measure<DensePerm, S>)> {
    match handle {
        Handle::Bubble(m) => Ok((m.group(), m.measure()?)),
        Handle::Alternating(m) => Ok((m.group(), m.measure()?)),
        Handle::Glued(_) => Err(Error::Unsupported("not a permutation model".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_parse() {
        for n in ["z", "z3", "lattice2", "pocket-z", "pocket-z3", "star-lattice2", "gamma-beta-2", "rooted-z-z2", "houghton-3", "a5", "bubble-8-16"] {
            assert!(parse_group(n).is_ok(), "{n}");
        }
        assert!(parse_group("zz").is_err());
        assert!(parse_group("rooted-z").is_err());
    }

    #[test]
    fn rooted_measure_is_average() {
        let Handle::Glued(g) = parse_group("rooted-z-z2").unwrap() else { panic!() };
        let m = glued_measure::<f64>(&g).unwrap();
        assert_eq!(m.atoms().len(), 3);
        assert!(m.is_symmetric());
        let w: Vec<f64> = m.atoms().iter().map(|(_, w)| *w).collect();
        assert!(w.contains(&0.5) && w.contains(&0.25));
    }
}
