use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `|10bar⟩ → |01bar⟩`, `z_e` from `+h` to `−h`.
    Down,
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpEvent {
    /// First sample beyond the new band.
    pub time: f64,
    pub direction: Direction,
    /// From the last sample beyond the old band to `time`.
    pub transit: f64,
}

/// Hysteresis detector: the label becomes `±1` when `z_e` passes `±h` and a
/// jump is a label change. Samples before the first labeled one are ignored.
pub fn detect_jumps(times: &[f64], z_e: &[f64], h: f64) -> Vec<JumpEvent> {
    let mut events = Vec::new();
    let mut label = 0i8;
    let mut last_in_band = f64::NAN;
    for (&t, &z) in times.iter().zip(z_e) {
        let here = if z > h {
            1
        } else if z < -h {
            -1
        } else {
            continue;
        };
        if label != 0 && here != label {
            let direction = if here > 0 { Direction::Up } else { Direction::Down };
            events.push(JumpEvent { time: t, direction, transit: t - last_in_band });
        }
        label = here;
        last_in_band = t;
    }
    events
}
