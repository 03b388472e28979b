//! Closed rings built from a parsed ring file.

use std::collections::HashMap;
use std::sync::Arc;

use super::dsl::{ConeGens, Item, RingFile};
use crate::error::{Error, Result};
use crate::etale::{
    close_subring, Ambient, ComputedSubring, Element, NumberField, ProductAlgebra,
    SubringPresentation,
};
use crate::exact::Poly;

#[derive(Clone, Debug)]
pub struct Ordering {
    pub subring: String,
    /// `None` for the cone of sums of squares.
    pub generators: Option<Vec<Element>>,
}

/// Subrings are closed eagerly; a subring that fails to close keeps its
/// error so directives naming it can report it.
#[derive(Debug, Default)]
pub struct Model {
    pub ambients: HashMap<String, Ambient>,
    pub subrings: Vec<(String, Result<ComputedSubring>)>,
    pub orderings: Vec<(String, Ordering)>,
}

impl Model {
    pub fn build(file: &RingFile) -> Result<Self> {
        let mut fields: HashMap<&str, NumberField> = HashMap::new();
        let mut model = Model::default();
        for item in &file.items {
            match item {
                Item::Field(d) => {
                    fields.insert(
                        &d.name,
                        NumberField::new(d.name.clone(), Poly::new(d.coeffs.clone()))?,
                    );
                }
                Item::Ambient(d) => {
                    let factors = d
                        .factors
                        .iter()
                        .map(|f| fields[f.as_str()].clone())
                        .collect();
                    model
                        .ambients
                        .insert(d.name.clone(), Arc::new(ProductAlgebra::new(factors)?));
                }
                Item::Subring(d) => {
                    let amb = model.ambients[&d.ambient].clone();
                    let ring = elements(&amb, &d.gens)
                        .and_then(|gens| SubringPresentation::new(amb.clone(), gens, d.mode))
                        .and_then(|p| close_subring(&p));
                    model.subrings.push((d.name.clone(), ring));
                }
                Item::Ordering(d) => {
                    let generators = match &d.gens {
                        ConeGens::Squares => None,
                        ConeGens::Elements(g) => {
                            let amb = match model.subring(&d.subring) {
                                Ok(r) => r.ambient_arc(),
                                Err(_) => continue,
                            };
                            Some(elements(&amb, g)?)
                        }
                    };
                    model.orderings.push((
                        d.name.clone(),
                        Ordering {
                            subring: d.subring.clone(),
                            generators,
                        },
                    ));
                }
                Item::Directive(_) => {}
            }
        }
        Ok(model)
    }

    pub fn subring(&self, name: &str) -> Result<&ComputedSubring> {
        let (_, r) = self
            .subrings
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| Error::Precondition(format!("no subring `{name}`")))?;
        r.as_ref().map_err(Clone::clone)
    }

    /// First declared subring, the one a fixture file is about.
    pub fn primary(&self) -> Result<&ComputedSubring> {
        let (name, _) = self
            .subrings
            .first()
            .ok_or_else(|| Error::Precondition("file declares no subring".into()))?;
        self.subring(name)
    }

    pub fn orderings_on<'a>(
        &'a self,
        subring: &'a str,
    ) -> impl Iterator<Item = (&'a str, &'a Ordering)> {
        self.orderings
            .iter()
            .filter(move |(_, o)| o.subring == subring)
            .map(|(n, o)| (n.as_str(), o))
    }
}

fn elements(amb: &Ambient, gens: &[Vec<Poly>]) -> Result<Vec<Element>> {
    gens.iter().map(|g| amb.element(g.clone())).collect()
}
