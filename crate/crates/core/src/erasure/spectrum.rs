use super::PhysicalContext;

/// A product-basis label `|φ_l⟩ ⊗ |ξ_m⟩` (0-based; `l` in the object frame,
/// `m` in the ascending reservoir energy basis).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub object: usize,
    pub level: usize,
}

impl Label {
    pub fn new(object: usize, level: usize) -> Self {
        Self { object, level }
    }

    pub fn index(&self, d_r: usize) -> usize {
        self.object * d_r + self.level
    }

    pub fn from_index(k: usize, d_r: usize) -> Self {
        Self {
            object: k / d_r,
            level: k % d_r,
        }
    }
}

/// The joint spectrum `p↓` with the label each entry came from.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedSpectrum {
    pub values: Vec<f64>,
    pub labels: Vec<Label>,
}

impl OrderedSpectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// All products `o_l r_m`, sorted non-increasing; ties keep ascending
/// `(l, m)` order.
pub fn joint_ordered_spectrum(ctx: &PhysicalContext) -> OrderedSpectrum {
    let d_r = ctx.d_r();
    let p = ctx.joint_populations();
    let mut idx: Vec<usize> = (0..p.len()).collect();
    idx.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(a.cmp(&b)));
    OrderedSpectrum {
        values: idx.iter().map(|&k| p[k]).collect(),
        labels: idx.iter().map(|&k| Label::from_index(k, d_r)).collect(),
    }
}

/// `p_max = Σ_{m ≤ d_R} p↓_m`.
pub fn max_erasure_probability(ctx: &PhysicalContext) -> f64 {
    let s = joint_ordered_spectrum(ctx);
    s.values[..ctx.d_r()].iter().sum::<f64>().min(1.0)
}

/// Whether any unitary can raise the probability of `|φ_1⟩` above `o↓_1`.
pub fn nontrivial_erasure_possible(ctx: &PhysicalContext) -> bool {
    let o = ctx.object_populations();
    if o.len() < 2 || o[1] <= 0.0 {
        return false;
    }
    let e = ctx.reservoir_energies();
    let spread = e[e.len() - 1] - e[0];
    (o[0] / o[1]).ln() < ctx.beta() * spread
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_examples() {
        let ctx = PhysicalContext::diagonal(&[0.5, 0.5], vec![0.0, 1.0], 1e6).unwrap();
        let s = joint_ordered_spectrum(&ctx);
        assert_eq!(s.values, vec![0.5, 0.5, 0.0, 0.0]);
        assert_eq!(s.labels[1], Label::new(1, 0));

        let ctx = PhysicalContext::diagonal(&[0.5, 0.5], vec![0.0, 1.0], 1.0).unwrap();
        let s = joint_ordered_spectrum(&ctx);
        let want = [0.365_529_289_3, 0.365_529_289_3, 0.134_470_710_7, 0.134_470_710_7];
        for (a, b) in s.values.iter().zip(want) {
            assert!((a - b).abs() < 1e-9);
        }

        let ctx = PhysicalContext::diagonal(&[1.0], vec![0.0, 1.0, 3.0], 1.0).unwrap();
        let s = joint_ordered_spectrum(&ctx);
        assert_eq!(s.values, ctx.reservoir_populations());
    }

    #[test]
    fn pmax_examples() {
        let ctx = PhysicalContext::diagonal(&[0.5, 0.5], vec![0.0, 1.0], 1e6).unwrap();
        assert_eq!(max_erasure_probability(&ctx), 1.0);
        let ctx = PhysicalContext::diagonal(&[0.5, 0.5], vec![0.0, 1.0], 1e-12).unwrap();
        assert!((max_erasure_probability(&ctx) - 0.5).abs() < 1e-10);
        let ctx = PhysicalContext::diagonal(&[0.5, 0.5], vec![0.0, 1.0], 1.0).unwrap();
        assert!((max_erasure_probability(&ctx) - 0.731_058_578_6).abs() < 1e-9);
    }

    #[test]
    fn nontrivial_examples() {
        let ctx = PhysicalContext::diagonal(&[0.5, 0.5], vec![0.0, 0.3, 1.0], 2.0).unwrap();
        assert!(nontrivial_erasure_possible(&ctx));
        let ctx = PhysicalContext::diagonal(&[0.5, 0.5], vec![1.0, 1.0], 2.0).unwrap();
        assert!(!nontrivial_erasure_possible(&ctx));
        let ctx = PhysicalContext::diagonal(&[0.9, 0.1], vec![0.0, 1.0], 2.0).unwrap();
        assert!(!nontrivial_erasure_possible(&ctx));
        let ctx = PhysicalContext::diagonal(&[1.0, 0.0], vec![0.0, 1.0], 2.0).unwrap();
        assert!(!nontrivial_erasure_possible(&ctx));
    }
}
