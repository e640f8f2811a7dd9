//! Deterministic SVG rendering of orbit-space scenes: the strip boundary,
//! stable/unstable leaf segments, lozenges, and leaf saturations.

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

use rigiditylab_core::orbitspace::{eta, string_of_lozenges, OrbitPoint};
use rigiditylab_core::rat::{self, Rat};

const STABLE_COLOR: &str = "#2255cc";
const UNSTABLE_COLOR: &str = "#cc3333";
const SHADE_COLOR: &str = "#b7b7e0";
const BOUNDARY_COLOR: &str = "#444444";
const STROKE: &str = "1.5";

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Viewport {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub width: u32,
    pub height: u32,
}

impl Default for Viewport {
    fn default() -> Self {
        Viewport {
            xmin: -0.5,
            xmax: 4.5,
            ymin: -0.5,
            ymax: 4.5,
            width: 480,
            height: 480,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeafDir {
    Stable,
    Unstable,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScenePoint {
    pub at: [f64; 2],
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SceneLeaf {
    pub through: [f64; 2],
    pub dir: LeafDir,
    #[serde(default)]
    pub dashed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SceneLozenge {
    pub corner: [f64; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionDir {
    Stable,
    Unstable,
    Union,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SceneRegion {
    pub corner: [f64; 2],
    pub dir: RegionDir,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Scene {
    #[serde(default)]
    pub viewport: Option<Viewport>,
    #[serde(default)]
    pub points: Vec<ScenePoint>,
    #[serde(default)]
    pub leaves: Vec<SceneLeaf>,
    #[serde(default)]
    pub lozenges: Vec<SceneLozenge>,
    #[serde(default)]
    pub regions: Vec<SceneRegion>,
}

struct Mapper {
    vp: Viewport,
}

impl Mapper {
    fn x(&self, x: f64) -> f64 {
        (x - self.vp.xmin) / (self.vp.xmax - self.vp.xmin) * self.vp.width as f64
    }

    fn y(&self, y: f64) -> f64 {
        self.vp.height as f64 - (y - self.vp.ymin) / (self.vp.ymax - self.vp.ymin) * self.vp.height as f64
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

/// Renders a scene to SVG 1.1 text; identical scenes give identical bytes.
pub fn render_svg(scene: &Scene) -> Result<String> {
    let vp = scene.viewport.unwrap_or_default();
    if vp.width == 0 || vp.height == 0 || vp.xmax <= vp.xmin || vp.ymax <= vp.ymin {
        bail!("empty viewport");
    }
    let m = Mapper { vp };
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        vp.width, vp.height, vp.width, vp.height
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Shaded saturation regions first, under everything else. The stable
    // saturation of the lozenge with corner (x, y) is the slab between the
    // horizontal leaves v = y and v = x + 1, clipped to the strip |u-v| < 1.
    for region in &scene.regions {
        let (x, y) = (region.corner[0], region.corner[1]);
        let mut bands: Vec<(f64, f64, bool)> = Vec::new();
        match region.dir {
            RegionDir::Stable => bands.push((y, x + 1.0, true)),
            RegionDir::Unstable => bands.push((x, y + 1.0, false)),
            RegionDir::Union => {
                bands.push((y, x + 1.0, true));
                bands.push((x, y + 1.0, false));
            }
        }
        for (lo, hi, horizontal) in bands {
            let poly = if horizontal {
                // v in [lo, hi], u in (v-1, v+1).
                [
                    (lo - 1.0, lo),
                    (lo + 1.0, lo),
                    (hi + 1.0, hi),
                    (hi - 1.0, hi),
                ]
            } else {
                // u in [lo, hi], v in (u-1, u+1).
                [
                    (lo, lo - 1.0),
                    (lo, lo + 1.0),
                    (hi, hi + 1.0),
                    (hi, hi - 1.0),
                ]
            };
            let pts: Vec<String> = poly
                .iter()
                .map(|(u, v)| format!("{},{}", fmt(m.x(*u)), fmt(m.y(*v))))
                .collect();
            out.push_str(&format!(
                "<polygon class=\"region\" points=\"{}\" fill=\"{}\" fill-opacity=\"0.45\" stroke=\"none\"/>\n",
                pts.join(" "),
                SHADE_COLOR
            ));
        }
    }

    // Strip boundary: the dashed lines v = u - 1 and v = u + 1.
    for off in [-1.0, 1.0] {
        let u0 = vp.xmin.max(vp.ymin - off);
        let u1 = vp.xmax.min(vp.ymax - off);
        if u0 < u1 {
            out.push_str(&format!(
                "<line class=\"boundary\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\" stroke-dasharray=\"6 4\"/>\n",
                fmt(m.x(u0)),
                fmt(m.y(u0 + off)),
                fmt(m.x(u1)),
                fmt(m.y(u1 + off)),
                BOUNDARY_COLOR,
                STROKE
            ));
        }
    }

    let leaf_line = |out: &mut String, through: [f64; 2], dir: LeafDir, dashed: bool| {
        let dash = if dashed { " stroke-dasharray=\"5 4\"" } else { "" };
        match dir {
            LeafDir::Stable => {
                // Horizontal at v = y, u in (y-1, y+1), clipped to viewport.
                let v = through[1];
                let u0 = (v - 1.0).max(vp.xmin);
                let u1 = (v + 1.0).min(vp.xmax);
                out.push_str(&format!(
                    "<line class=\"leaf stable\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"{}/>\n",
                    fmt(m.x(u0)),
                    fmt(m.y(v)),
                    fmt(m.x(u1)),
                    fmt(m.y(v)),
                    STABLE_COLOR,
                    STROKE,
                    dash
                ));
            }
            LeafDir::Unstable => {
                let u = through[0];
                let v0 = (u - 1.0).max(vp.ymin);
                let v1 = (u + 1.0).min(vp.ymax);
                out.push_str(&format!(
                    "<line class=\"leaf unstable\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"{}/>\n",
                    fmt(m.x(u)),
                    fmt(m.y(v0)),
                    fmt(m.x(u)),
                    fmt(m.y(v1)),
                    UNSTABLE_COLOR,
                    STROKE,
                    dash
                ));
            }
        }
    };

    for leaf in &scene.leaves {
        leaf_line(&mut out, leaf.through, leaf.dir, leaf.dashed);
    }

    // Lozenges: sides are the leaf segments between the two corners.
    for loz in &scene.lozenges {
        let (x, y) = (loz.corner[0], loz.corner[1]);
        let (x2, y2) = (y + 1.0, x + 1.0);
        let sides = [
            ((x, y), (x2, y), STABLE_COLOR),
            ((x, y), (x, y2), UNSTABLE_COLOR),
            ((x, y2), (x2, y2), STABLE_COLOR),
            ((x2, y), (x2, y2), UNSTABLE_COLOR),
        ];
        for ((ux, uy), (wx, wy), color) in sides {
            out.push_str(&format!(
                "<line class=\"lozenge\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>\n",
                fmt(m.x(ux)),
                fmt(m.y(uy)),
                fmt(m.x(wx)),
                fmt(m.y(wy)),
                color,
                STROKE
            ));
        }
        for (cx, cy) in [(x, y), (x2, y2)] {
            out.push_str(&format!(
                "<circle class=\"corner\" cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"black\"/>\n",
                fmt(m.x(cx)),
                fmt(m.y(cy))
            ));
        }
    }

    for p in &scene.points {
        out.push_str(&format!(
            "<circle class=\"point\" cx=\"{}\" cy=\"{}\" r=\"3.5\" fill=\"black\"/>\n",
            fmt(m.x(p.at[0])),
            fmt(m.y(p.at[1]))
        ));
        if let Some(label) = &p.label {
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"14\" font-family=\"serif\">{}</text>\n",
                fmt(m.x(p.at[0]) + 6.0),
                fmt(m.y(p.at[1]) - 6.0),
                label
            ));
        }
    }

    out.push_str("</svg>\n");
    Ok(out)
}

fn to_f64_pair(o: &OrbitPoint) -> [f64; 2] {
    [rat::to_f64(&o.x), rat::to_f64(&o.y)]
}

/// A point, its two leaves, and its half-step image with dashed leaves.
pub fn figure1() -> Scene {
    let o = OrbitPoint::new(Rat::new(8.into(), 5.into()), Rat::new(6.into(), 5.into())).unwrap();
    let eo = eta(&o);
    Scene {
        viewport: Some(Viewport::default()),
        points: vec![
            ScenePoint {
                at: to_f64_pair(&o),
                label: Some("o".into()),
            },
            ScenePoint {
                at: to_f64_pair(&eo),
                label: Some("h(o)".into()),
            },
        ],
        leaves: vec![
            SceneLeaf {
                through: to_f64_pair(&o),
                dir: LeafDir::Stable,
                dashed: false,
            },
            SceneLeaf {
                through: to_f64_pair(&o),
                dir: LeafDir::Unstable,
                dashed: false,
            },
            SceneLeaf {
                through: to_f64_pair(&eo),
                dir: LeafDir::Stable,
                dashed: true,
            },
            SceneLeaf {
                through: to_f64_pair(&eo),
                dir: LeafDir::Unstable,
                dashed: true,
            },
        ],
        lozenges: vec![],
        regions: vec![],
    }
}

/// Part of a string of lozenges along the diagonal.
pub fn figure2() -> Scene {
    let o = OrbitPoint::new(Rat::new(3.into(), 2.into()), Rat::new(3.into(), 2.into())).unwrap();
    let string = string_of_lozenges(&o, 1);
    Scene {
        viewport: Some(Viewport {
            xmin: -1.0,
            xmax: 5.0,
            ymin: -1.0,
            ymax: 5.0,
            width: 480,
            height: 480,
        }),
        points: vec![],
        leaves: vec![],
        lozenges: string
            .iter()
            .map(|l| SceneLozenge {
                corner: at_corner(l),
            })
            .collect(),
        regions: vec![],
    }
}

fn at_corner(l: &rigiditylab_core::orbitspace::Lozenge) -> [f64; 2] {
    to_f64_pair(l.corner())
}

/// A lozenge with both leaf saturations shaded.
pub fn figure3() -> Scene {
    let corner = [1.5, 1.5];
    Scene {
        viewport: Some(Viewport::default()),
        points: vec![],
        leaves: vec![],
        lozenges: vec![SceneLozenge { corner }],
        regions: vec![SceneRegion {
            corner,
            dir: RegionDir::Union,
        }],
    }
}

/// Two consecutive lozenges, the second inside the stable saturation of the
/// first (the allowed configuration).
pub fn figure4() -> Scene {
    let prev = [1.5, 0.8];
    let next = [1.2, 1.9];
    Scene {
        viewport: Some(Viewport::default()),
        points: vec![],
        leaves: vec![],
        lozenges: vec![SceneLozenge { corner: prev }, SceneLozenge { corner: next }],
        regions: vec![SceneRegion {
            corner: prev,
            dir: RegionDir::Stable,
        }],
    }
}

pub fn preset(name: &str) -> Result<Scene> {
    match name {
        "figure1" => Ok(figure1()),
        "figure2" => Ok(figure2()),
        "figure3" => Ok(figure3()),
        "figure4" => Ok(figure4()),
        other => bail!("unknown preset `{other}` (expected figure1..figure4)"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure1_structure() {
        let svg = render_svg(&figure1()).unwrap();
        assert_eq!(svg.matches("class=\"boundary\"").count(), 2);
        assert_eq!(svg.matches("class=\"leaf").count(), 4);
        assert_eq!(svg.matches("class=\"point\"").count(), 2);
    }

    #[test]
    fn figure3_has_two_shaded_polygons() {
        let svg = render_svg(&figure3()).unwrap();
        assert_eq!(svg.matches("class=\"region\"").count(), 2);
    }

    #[test]
    fn deterministic_bytes() {
        let a = render_svg(&figure2()).unwrap();
        let b = render_svg(&figure2()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_viewport_rejected() {
        let mut scene = figure1();
        scene.viewport = Some(Viewport {
            xmin: 0.0,
            xmax: 0.0,
            ymin: 0.0,
            ymax: 1.0,
            width: 100,
            height: 100,
        });
        assert!(render_svg(&scene).is_err());
    }

    #[test]
    fn scene_json_roundtrip() {
        let scene = figure4();
        let s = serde_json::to_string(&scene).unwrap();
        let back: Scene = serde_json::from_str(&s).unwrap();
        assert_eq!(render_svg(&scene).unwrap(), render_svg(&back).unwrap());
    }
}
