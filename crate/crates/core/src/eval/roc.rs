//! ROC curves over distance scores: a comparison is accepted when its
//! distance is at or below the threshold.

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Score {
    pub genuine: bool,
    /// Distance; smaller means more similar.
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub threshold: f64,
    pub far: f64,
    pub recognition_rate: f64,
}

/// Operating points swept over every distinct score, loosest last.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
}

pub fn roc_from_scores(scores: &[Score]) -> Result<RocCurve, EvalError> {
    let genuine = scores.iter().filter(|s| s.genuine).count();
    let impostor = scores.len() - genuine;
    if genuine == 0 || impostor == 0 {
        return Err(EvalError::SingleSidedScores);
    }
    let mut sorted: Vec<Score> = scores.to_vec();
    sorted.sort_by(|a, b| a.score.total_cmp(&b.score));

    let mut points = Vec::new();
    let (mut gen_acc, mut imp_acc) = (0usize, 0usize);
    let mut i = 0;
    while i < sorted.len() {
        let threshold = sorted[i].score;
        while i < sorted.len() && sorted[i].score == threshold {
            if sorted[i].genuine {
                gen_acc += 1;
            } else {
                imp_acc += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            threshold,
            far: imp_acc as f64 / impostor as f64,
            recognition_rate: gen_acc as f64 / genuine as f64,
        });
    }
    Ok(RocCurve { points })
}

impl RocCurve {
    /// Recognition rate at `far`, interpolated linearly between the bracketing
    /// operating points. The curve implicitly starts at (0, 0).
    pub fn rate_at_far(&self, far: f64) -> f64 {
        let mut lo = (0.0, 0.0);
        for p in &self.points {
            if p.far <= far {
                lo = (p.far, p.recognition_rate);
            } else {
                let (x0, y0) = lo;
                let t = (far - x0) / (p.far - x0);
                return y0 + t * (p.recognition_rate - y0);
            }
        }
        lo.1
    }
}
