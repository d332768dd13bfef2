use serde::{Deserialize, Serialize};

/// Cones supported by the solver. All of them are self-dual except the zero
/// cone, whose dual is the whole space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeKind {
    /// `{0}`: equality rows.
    Zero,
    /// Componentwise `>= 0`.
    NonNegative,
    /// `{(t, u) : ||u||_2 <= t}`; the first row is `t`.
    SecondOrder,
}

impl ConeKind {
    /// Euclidean projection of `v` onto the cone, in place.
    pub fn project(self, v: &mut [f64]) {
        match self {
            ConeKind::Zero => v.iter_mut().for_each(|x| *x = 0.0),
            ConeKind::NonNegative => v.iter_mut().for_each(|x| *x = x.max(0.0)),
            ConeKind::SecondOrder => project_soc(v),
        }
    }

    /// Distance from `v` to the cone.
    pub fn distance(self, v: &[f64]) -> f64 {
        let mut p = v.to_vec();
        self.project(&mut p);
        v.iter()
            .zip(&p)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Distance from `v` to the dual cone.
    pub fn dual_distance(self, v: &[f64]) -> f64 {
        match self {
            ConeKind::Zero => 0.0,
            other => other.distance(v),
        }
    }
}

fn project_soc(v: &mut [f64]) {
    if v.is_empty() {
        return;
    }
    let t = v[0];
    let norm = v[1..].iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm <= t {
        return;
    }
    if norm <= -t {
        v.iter_mut().for_each(|x| *x = 0.0);
        return;
    }
    let a = 0.5 * (t + norm);
    v[0] = a;
    let s = a / norm;
    v[1..].iter_mut().for_each(|x| *x *= s);
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn soc_projection_cases() {
        let mut inside = [2.0, 1.0, -1.0];
        ConeKind::SecondOrder.project(&mut inside);
        assert_eq!(inside, [2.0, 1.0, -1.0]);

        let mut polar = [-5.0, 3.0, 4.0];
        ConeKind::SecondOrder.project(&mut polar);
        assert_eq!(polar, [0.0, 0.0, 0.0]);

        let mut outside = [0.0, 3.0, 4.0];
        ConeKind::SecondOrder.project(&mut outside);
        assert!((outside[0] - 2.5).abs() < 1e-15);
        assert!((outside[1] - 1.5).abs() < 1e-15);
        assert!((outside[2] - 2.0).abs() < 1e-15);
    }

    proptest! {
        // Moreau: v = P_K(v) + P_{K°}(v) with the two parts orthogonal.
        #[test]
        fn soc_moreau_decomposition(v in prop::collection::vec(-10.0f64..10.0, 2..8)) {
            let mut p = v.clone();
            ConeKind::SecondOrder.project(&mut p);
            let q: Vec<f64> = v.iter().zip(&p).map(|(a, b)| a - b).collect();
            let dot: f64 = p.iter().zip(&q).map(|(a, b)| a * b).sum();
            prop_assert!(dot.abs() < 1e-9);
            // -q lies in the (self-dual) cone
            let neg: Vec<f64> = q.iter().map(|x| -x).collect();
            prop_assert!(ConeKind::SecondOrder.distance(&neg) < 1e-9);
            prop_assert!(ConeKind::SecondOrder.distance(&p) < 1e-12);
        }
    }
}
