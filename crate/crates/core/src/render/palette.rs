use serde::{Deserialize, Serialize};

use super::tables::{PLASMA, VIRIDIS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Palette {
    #[default]
    Viridis,
    Plasma,
}

impl Palette {
    fn table(&self) -> &'static [[f64; 3]; 256] {
        match self {
            Palette::Viridis => &VIRIDIS,
            Palette::Plasma => &PLASMA,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Palette::Viridis => "viridis",
            Palette::Plasma => "plasma",
        }
    }

    /// Linear interpolation along the table; `t` is clamped to `[0, 1]`.
    pub fn rgb(&self, t: f64) -> [f64; 3] {
        let table = self.table();
        let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
        let pos = t * 255.0;
        let i = (pos.floor() as usize).min(254);
        let f = pos - i as f64;
        let (a, b) = (table[i], table[i + 1]);
        [0, 1, 2].map(|c| a[c] + f * (b[c] - a[c]))
    }

    pub fn hex(&self, t: f64) -> String {
        let [r, g, b] = self.rgb(t).map(|c| (c * 255.0).round() as u8);
        format!("#{r:02x}{g:02x}{b:02x}")
    }
}

impl std::str::FromStr for Palette {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "viridis" => Ok(Palette::Viridis),
            "plasma" => Ok(Palette::Plasma),
            other => Err(format!("unknown palette {other:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        for p in [Palette::Viridis, Palette::Plasma] {
            assert_eq!(p.rgb(0.0), p.table()[0]);
            assert_eq!(p.rgb(1.0), p.table()[255]);
            assert_eq!(p.rgb(-3.0), p.table()[0]);
            assert_eq!(p.rgb(7.0), p.table()[255]);
        }
        assert_eq!(Palette::Viridis.hex(0.0), "#440154");
        assert_eq!(Palette::Viridis.hex(1.0), "#fde725");
        assert_eq!(Palette::Plasma.hex(0.0), "#0d0887");
        assert_eq!(Palette::Plasma.hex(1.0), "#f0f921");
    }

    #[test]
    fn exact_at_table_entries() {
        let p = Palette::Plasma;
        for i in [1usize, 17, 128, 254] {
            let got = p.rgb(i as f64 / 255.0);
            for c in 0..3 {
                assert!((got[c] - p.table()[i][c]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn monotone_along_the_table() {
        // position along the palette path never moves backwards
        for p in [Palette::Viridis, Palette::Plasma] {
            let table = p.table();
            let mut arc = vec![0.0];
            for w in table.windows(2) {
                let d: f64 = (0..3).map(|c| (w[1][c] - w[0][c]).powi(2)).sum::<f64>().sqrt();
                arc.push(arc.last().unwrap() + d);
            }
            let locate = |t: f64| {
                let pos = t * 255.0;
                let i = (pos.floor() as usize).min(254);
                arc[i] + (pos - i as f64) * (arc[i + 1] - arc[i])
            };
            let mut last = -1.0;
            for s in 0..=1000 {
                let here = locate(s as f64 / 1000.0);
                assert!(here >= last);
                last = here;
            }
            // luminance-like sum rises end to end
            assert!(p.rgb(1.0).iter().sum::<f64>() > p.rgb(0.0).iter().sum::<f64>());
        }
    }
}
