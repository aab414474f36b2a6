//! Log-sum-exp accumulation.

/// `ln(sum(exp(x_i)))`, exact for slices of `-inf`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + values.iter().map(|&v| (v - max).exp()).sum::<f64>().ln()
}

/// A partial sum `exp(max) * scaled` kept in factored form so that partial
/// results can be merged without loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledSum {
    pub max: f64,
    pub scaled: f64,
}

impl ScaledSum {
    pub const EMPTY: ScaledSum = ScaledSum {
        max: f64::NEG_INFINITY,
        scaled: 0.0,
    };

    pub fn ln(&self) -> f64 {
        if self.scaled == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }

    pub fn merge(self, other: ScaledSum) -> ScaledSum {
        if other.scaled == 0.0 {
            return self;
        }
        if self.scaled == 0.0 {
            return other;
        }
        let max = self.max.max(other.max);
        ScaledSum {
            max,
            scaled: self.scaled * (self.max - max).exp() + other.scaled * (other.max - max).exp(),
        }
    }
}
