use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use discrete_cycloids::evolute::{double_evolute, evolute};
use discrete_cycloids::four_vertex::verify_four_edgex_with_trace;
use discrete_cycloids::io::{
    eigenvectors_csv, matrix_csv, radii_csv, radii_json, read_ball, read_radii, spectrum_csv,
    spectrum_json,
};
use discrete_cycloids::random::{random_ball, random_closed_convex, random_constant_width, rng};
use discrete_cycloids::render::{
    ball_layer, double_evolute_layers, dual_layers, evolute_layers, polygon_layer, render_gallery,
    render_svg, Layer, RenderSpec, RenderWhat,
};
use discrete_cycloids::{
    decompose_into_cycloids, multiperiod_spectrum, solve_spectrum, spiraling_cycloid,
    traverse_m_times, CycloidError, CycloidSpectrum, EdgexReport, EvoluteOperator, Point,
    PolygonBall, RadiiVector, Tolerances,
};
use serde::Serialize;

use crate::{Command, Common, Format, SpiralArgs};

pub fn run(common: &Common, command: &Command) -> Result<()> {
    let ctx = Session::new(common)?;
    match command {
        Command::Dual => ctx.dual(),
        Command::Spectrum => ctx.spectrum(),
        Command::Cycloids { render } => ctx.cycloids(render.as_deref()),
        Command::Decompose { radii } => ctx.decompose(radii),
        Command::Edgex { radii, fuzz, trace } => match (radii, fuzz) {
            (_, Some(count)) => ctx.fuzz(*count),
            (Some(path), None) => ctx.edgex(path, *trace),
            (None, None) => bail!("edgex needs --radii or --fuzz"),
        },
        Command::Evolute {
            radii,
            double,
            matrix,
        } => ctx.evolute(radii.as_deref(), *double, *matrix),
        Command::Render {
            what,
            radii,
            lambda,
            spiral,
            scale,
            no_cusps,
        } => {
            let spec = RenderSpec {
                what: *what,
                scale: *scale,
                cusp_markers: !no_cusps,
                ..RenderSpec::default()
            };
            ctx.render(&spec, radii.as_deref(), *lambda, *spiral)
        }
        Command::Spiral { lambda, spiral } => ctx.spiral(*lambda, *spiral),
    }
}

struct Session<'a> {
    common: &'a Common,
    tol: Tolerances,
}

impl<'a> Session<'a> {
    fn new(common: &'a Common) -> Result<Self> {
        let tol = match common.tol {
            Some(t) if t.is_finite() && t > 0.0 => Tolerances::with_base(t),
            Some(t) => {
                return Err(
                    CycloidError::Format(format!("tolerance must be positive, got {t}")).into(),
                )
            }
            None => Tolerances::default(),
        };
        Ok(Self { common, tol })
    }

    fn turns(&self) -> usize {
        self.common.turns as usize
    }

    fn base_ball(&self, fallback: Option<&Path>) -> Result<PolygonBall> {
        let path = self
            .common
            .ball
            .as_deref()
            .or(fallback)
            .ok_or_else(|| CycloidError::Format("--ball is required".into()))?;
        Ok(read_ball(path, self.tol)?)
    }

    /// The ball traversed `--turns` times.
    fn ball(&self, fallback: Option<&Path>) -> Result<Arc<PolygonBall>> {
        let base = self.base_ball(fallback)?;
        let ball = if self.turns() > 1 {
            traverse_m_times(&base, self.turns())?
        } else {
            base
        };
        Ok(Arc::new(ball))
    }

    fn radii(&self, path: &Path) -> Result<RadiiVector> {
        let file = read_radii(path)?;
        let ball = self.ball(file.ball.as_deref())?;
        RadiiVector::new(ball, file.radii).with_context(|| path.display().to_string())
    }

    fn spectrum_of(&self, ball: PolygonBall) -> Result<CycloidSpectrum> {
        Ok(if self.turns() > 1 {
            multiperiod_spectrum(&ball, self.turns())?
        } else {
            solve_spectrum(&Arc::new(ball))?
        })
    }

    fn ext(&self) -> &'static str {
        match self.common.format {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    /// Prints `text`, or writes it to `<out>/<stem>.<ext>`.
    fn emit(&self, stem: &str, ext: &str, text: &str) -> Result<()> {
        match &self.common.out {
            Some(dir) => write_file(dir, &format!("{stem}.{ext}"), text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn dual(&self) -> Result<()> {
        let ball = self.ball(None)?;
        let dual = ball.dual();
        let text = match self.common.format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["index", "qx", "qy", "alpha", "beta"])?;
                for (i, q) in dual.vertices.iter().enumerate() {
                    w.write_record([
                        i.to_string(),
                        q.x.to_string(),
                        q.y.to_string(),
                        dual.alpha[i].to_string(),
                        dual.beta[i].to_string(),
                    ])?;
                }
                String::from_utf8(w.into_inner()?)?
            }
            Format::Json => {
                #[derive(Serialize)]
                struct Dual<'b> {
                    vertices: Vec<[f64; 2]>,
                    alpha: &'b [f64],
                    beta: &'b [f64],
                }
                let body = Dual {
                    vertices: dual.vertices.iter().map(|q| [q.x, q.y]).collect(),
                    alpha: &dual.alpha,
                    beta: &dual.beta,
                };
                serde_json::to_string_pretty(&body)? + "\n"
            }
        };
        self.emit("dual", self.ext(), &text)
    }

    fn spectrum(&self) -> Result<()> {
        let spectrum = self.spectrum_of(self.base_ball(None)?)?;
        let text = match self.common.format {
            Format::Csv => spectrum_csv(&spectrum),
            Format::Json => spectrum_json(&spectrum) + "\n",
        };
        self.emit("spectrum", self.ext(), &text)
    }

    fn cycloids(&self, render: Option<&Path>) -> Result<()> {
        let spectrum = self.spectrum_of(self.base_ball(None)?)?;
        if let Some(dir) = render {
            let spec = RenderSpec::new(RenderWhat::CycloidGallery);
            for (name, svg) in render_gallery(&spectrum, &spec)? {
                write_file(dir, &name, &svg)?;
            }
            return Ok(());
        }
        let text = match self.common.format {
            Format::Csv => eigenvectors_csv(&spectrum),
            Format::Json => spectrum_json(&spectrum) + "\n",
        };
        self.emit("cycloids", self.ext(), &text)
    }

    fn decompose(&self, path: &Path) -> Result<()> {
        let r = self.radii(path)?;
        let parts = decompose_into_cycloids(&r)?;
        #[derive(Serialize)]
        struct Row {
            index: usize,
            k_label: String,
            branch: Option<u8>,
            eigenvalue: f64,
            coefficient: f64,
        }
        let rows: Vec<Row> = parts
            .iter()
            .enumerate()
            .map(|(index, (c, coef))| Row {
                index,
                k_label: c.label.text(),
                branch: c.label.branch,
                eigenvalue: c.eigenvalue,
                coefficient: *coef,
            })
            .collect();
        let text = match self.common.format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in &rows {
                    w.serialize(row)?;
                }
                String::from_utf8(w.into_inner()?)?
            }
            Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        };
        self.emit("decomposition", self.ext(), &text)
    }

    fn edgex(&self, path: &Path, trace: usize) -> Result<()> {
        let report = verify_four_edgex_with_trace(&self.radii(path)?, trace)?;
        let text = match self.common.format {
            Format::Csv => report_csv(&report),
            Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        };
        self.emit("edgex", self.ext(), &text)
    }

    /// Random closed convex polygons and constant-width polygons on random
    /// balls with 3 to 16 half-sides.
    fn fuzz(&self, count: usize) -> Result<()> {
        #[derive(Serialize)]
        struct Row {
            case: usize,
            n: usize,
            kind: &'static str,
            edgex_count: usize,
        }
        let mut g = rng(self.common.seed);
        let mut rows = Vec::with_capacity(2 * count);
        for case in 0..count {
            let n = 3 + case % 14;
            let ball = Arc::new(random_ball(&mut g, n).with_tolerances(self.tol));
            let convex = random_closed_convex(&mut g, Arc::clone(&ball));
            let width = random_constant_width(&mut g, ball);
            for (kind, r) in [("convex", convex), ("constant_width", width)] {
                let report = verify_four_edgex_with_trace(&r, 0)
                    .with_context(|| format!("case {case} ({kind}, n = {n})"))?;
                rows.push(Row {
                    case,
                    n,
                    kind,
                    edgex_count: report.edgex_count,
                });
            }
        }
        let text = match self.common.format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in &rows {
                    w.serialize(row)?;
                }
                String::from_utf8(w.into_inner()?)?
            }
            Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        };
        self.emit("edgex_fuzz", self.ext(), &text)
    }

    fn evolute(&self, radii: Option<&Path>, double: bool, matrix: bool) -> Result<()> {
        if matrix {
            let op = EvoluteOperator::new(self.ball(None)?);
            let (m, stem) = if double {
                (op.tp(), "double_evolute_matrix")
            } else {
                (op.ep(), "evolute_matrix")
            };
            let text = match self.common.format {
                Format::Csv => matrix_csv(m),
                Format::Json => {
                    let rows: Vec<Vec<f64>> = m
                        .row_iter()
                        .map(|row| row.iter().copied().collect())
                        .collect();
                    serde_json::to_string_pretty(&rows)? + "\n"
                }
            };
            return self.emit(stem, self.ext(), &text);
        }
        let path = radii.ok_or_else(|| anyhow!("evolute needs --radii"))?;
        let r = self.radii(path)?;
        let (values, stem) = if double {
            (double_evolute(&r).into_values(), "double_evolute")
        } else {
            (evolute(&r).values().to_vec(), "evolute")
        };
        let text = match self.common.format {
            Format::Csv => radii_csv(&values),
            Format::Json => radii_json(&values, None) + "\n",
        };
        self.emit(stem, self.ext(), &text)
    }

    fn render(
        &self,
        spec: &RenderSpec,
        radii: Option<&Path>,
        lambda: Option<f64>,
        spiral: SpiralArgs,
    ) -> Result<()> {
        let need_radii = || -> Result<RadiiVector> {
            let path = radii.ok_or_else(|| anyhow!("--what {} needs --radii", spec.what))?;
            self.radii(path)
        };
        let layers: Vec<Layer> = match spec.what {
            RenderWhat::Ball => vec![ball_layer(&*self.ball(None)?)],
            RenderWhat::Dual => dual_layers(&*self.ball(None)?),
            RenderWhat::Polygon => vec![polygon_layer(&need_radii()?, Point::zeros())],
            RenderWhat::Evolute => evolute_layers(&need_radii()?, Point::zeros()),
            RenderWhat::DoubleEvolute => double_evolute_layers(&need_radii()?, Point::zeros()),
            RenderWhat::Spiral => {
                let lambda = lambda.ok_or_else(|| anyhow!("--what spiral needs --lambda"))?;
                let ball = self.ball(None)?;
                vec![Layer::open(spiraling_cycloid(
                    &ball,
                    lambda,
                    spiral.r1,
                    spiral.r2,
                    spiral.laps,
                ))]
            }
            RenderWhat::CycloidGallery => {
                let dir = self
                    .common
                    .out
                    .as_deref()
                    .ok_or_else(|| anyhow!("--what cycloid_gallery needs --out DIR"))?;
                let spectrum = self.spectrum_of(self.base_ball(None)?)?;
                for (name, svg) in render_gallery(&spectrum, spec)? {
                    write_file(dir, &name, &svg)?;
                }
                return Ok(());
            }
        };
        let svg = render_svg(&layers, spec)?;
        self.emit(spec.what.name(), "svg", &svg)
    }

    fn spiral(&self, lambda: f64, spiral: SpiralArgs) -> Result<()> {
        let ball = self.ball(None)?;
        let points = spiraling_cycloid(&ball, lambda, spiral.r1, spiral.r2, spiral.laps);
        let text = match self.common.format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["index", "x", "y"])?;
                for (i, p) in points.iter().enumerate() {
                    w.write_record([i.to_string(), p.x.to_string(), p.y.to_string()])?;
                }
                String::from_utf8(w.into_inner()?)?
            }
            Format::Json => {
                let pts: Vec<[f64; 2]> = points.iter().map(|p| [p.x, p.y]).collect();
                serde_json::to_string_pretty(&pts)? + "\n"
            }
        };
        self.emit("spiral", self.ext(), &text)
    }
}

fn report_csv(report: &EdgexReport) -> String {
    let mut text = String::from("edgex,first,last\n");
    for (i, [a, b]) in report.positions.iter().enumerate() {
        text += &format!("{i},{a},{b}\n");
    }
    text
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path: PathBuf = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
}
