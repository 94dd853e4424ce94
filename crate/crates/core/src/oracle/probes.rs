use std::sync::Arc;

use super::enumerate_qcategories_up_to;
use crate::qcat::{arrow_category, one_object, QCategory};
use crate::quantaloid::Quantaloid;

#[derive(Debug, Clone)]
pub struct Probe {
    pub label: String,
    pub category: Arc<QCategory>,
}

/// The categories `P'` against which universal properties are tested.
#[derive(Debug, Clone, Default)]
pub struct ProbeFamily {
    pub probes: Vec<Probe>,
}

impl ProbeFamily {
    /// The one-object categories `*_X` followed by `P_f` for every Q-arrow `f`.
    pub fn standard(q: &Arc<Quantaloid>) -> Self {
        let mut probes: Vec<Probe> =
            q.objects().map(|x| Probe { label: format!("pt({})", q.name(x)), category: one_object(q, x) }).collect();
        for f in q.arrows() {
            let label = format!("P({}: {}->{})", q.hom(f.src, f.tgt).name(f.elem), q.name(f.src), q.name(f.tgt));
            let category = arrow_category(q, &f).expect("arrows of q are well typed");
            probes.push(Probe { label, category });
        }
        Self { probes }
    }

    /// Every category over `q` with at most `max_objects` objects, in enumeration order.
    pub fn all_up_to(q: &Arc<Quantaloid>, max_objects: usize) -> Self {
        let probes = enumerate_qcategories_up_to(q, max_objects)
            .into_iter()
            .enumerate()
            .map(|(i, c)| Probe { label: format!("small#{i}"), category: Arc::new(c) })
            .collect();
        Self { probes }
    }

    pub fn with_extra(mut self, label: impl Into<String>, category: Arc<QCategory>) -> Self {
        self.probes.push(Probe { label: label.into(), category });
        self
    }

    pub fn extend(mut self, other: ProbeFamily) -> Self {
        self.probes.extend(other.probes);
        self
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantaloid::{boolean_quantale, chain_quantale};

    #[test]
    fn standard_family_over_boolean() {
        let q = Arc::new(boolean_quantale());
        let family = ProbeFamily::standard(&q);
        let labels: Vec<&str> = family.probes.iter().map(|p| p.label.as_str()).collect();
        assert_eq!(labels, vec!["pt(*)", "P(0: *->*)", "P(1: *->*)"]);
        assert!(family.probes.iter().all(|p| p.category.is_valid()));
    }

    #[test]
    fn standard_family_size() {
        let q = Arc::new(chain_quantale(3).unwrap());
        assert_eq!(ProbeFamily::standard(&q).len(), 1 + 4);
    }
}
