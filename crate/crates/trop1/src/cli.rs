//! Subcommand entry points shared by the `trop1` binary and the test suite.
//!
//! Exit code contract: 0 = yes (well-spaced / witness found), 1 = no,
//! 2 = invalid input or internal error. All outputs are deterministic:
//! repeated runs on the same input produce byte-identical text.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::descent::{configuration_exists, DescentInstance, DescentProblem};
use crate::error::TropError;
use crate::instance::{parse_instance, serialize_instance, Instance};
use crate::linalg::{format_rat, parse_rat, Rat, RatVec};
use crate::moduli::{
    assemble_complex, enumerate_types, is_superabundant, radial_subdivision,
    well_spaced_subcomplex, ConeComplex, RadialType,
};
use crate::tropmap::{ContactOrder, RecessionType, TropicalMap};
use crate::wellspaced::{
    is_well_spaced, line_verdict, satisfies_speyer, LineVerdict, WellSpacedReport,
};

/// What a subcommand produced: the process exit code and the stdout text.
#[derive(Debug)]
pub struct CliOutcome {
    pub exit_code: i32,
    pub stdout: String,
}

impl CliOutcome {
    fn ok(stdout: String) -> Self {
        CliOutcome { exit_code: 0, stdout }
    }
}

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

// ---------------------------------------------------------------- check --

#[derive(Clone, Debug, Default)]
pub struct CheckOptions {
    /// Check only the projection along this character.
    pub chi: Option<RatVec>,
    /// Also evaluate and report Speyer's condition (line targets).
    pub speyer: bool,
    /// Write a structured JSON report here.
    pub report: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
pub struct CheckReport {
    pub instance: String,
    pub well_spaced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub speyer: Option<bool>,
    pub degenerate_warning: bool,
    pub image_reading_differs: bool,
    pub flats: Vec<FlatReportDto>,
}

#[derive(Serialize, Deserialize)]
pub struct FlatReportDto {
    pub subspace_basis: Vec<Vec<String>>,
    pub chi: Vec<String>,
    pub well_spaced: bool,
    pub neighborhood_moves: bool,
    pub globally_constant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_distance: Option<String>,
    pub min_count: usize,
    pub min_base_count: usize,
    pub flags: Vec<FlagDto>,
}

#[derive(Serialize, Deserialize)]
pub struct FlagDto {
    pub flag: String,
    pub base: String,
    pub distance: String,
    pub nonzero_slope: bool,
}

fn flat_dto(basis: &[RatVec], chi: &RatVec, v: &LineVerdict) -> FlatReportDto {
    FlatReportDto {
        subspace_basis: basis
            .iter()
            .map(|b| b.0.iter().map(format_rat).collect())
            .collect(),
        chi: chi.0.iter().map(format_rat).collect(),
        well_spaced: v.well_spaced,
        neighborhood_moves: v.neighborhood_moves,
        globally_constant: v.globally_constant,
        min_distance: v.min_distance.as_ref().map(format_rat),
        min_count: v.min_count,
        min_base_count: v.min_base_count,
        flags: v
            .flags
            .iter()
            .map(|f| FlagDto {
                flag: f.label.clone(),
                base: f.base_label.clone(),
                distance: format_rat(&f.distance),
                nonzero_slope: f.nonzero_slope,
            })
            .collect(),
    }
}

fn report_for(
    map: &TropicalMap,
    name: &str,
    opts: &CheckOptions,
) -> Result<CheckReport, TropError> {
    let speyer = if opts.speyer {
        Some(satisfies_speyer(map)?)
    } else {
        None
    };
    if let Some(chi) = &opts.chi {
        if chi.dim() != map.ambient_dim() {
            return Err(TropError::DimensionMismatch {
                expected: map.ambient_dim(),
                got: chi.dim(),
            });
        }
        let slopes = map.project(chi);
        let values: Vec<Rat> = map.positions.iter().map(|p| chi.dot(p)).collect();
        let verdict = line_verdict(map, &slopes, &values)?;
        return Ok(CheckReport {
            instance: name.to_string(),
            well_spaced: verdict.well_spaced,
            speyer,
            degenerate_warning: verdict.globally_constant,
            image_reading_differs: verdict.image_reading_differs,
            flats: vec![flat_dto(&[], chi, &verdict)],
        });
    }
    let report: WellSpacedReport = is_well_spaced(map)?;
    Ok(CheckReport {
        instance: name.to_string(),
        well_spaced: report.well_spaced,
        speyer,
        degenerate_warning: report.degenerate_warning,
        image_reading_differs: report.image_reading_differs,
        flats: report
            .flats
            .iter()
            .map(|f| flat_dto(f.flat.subspace.basis(), &f.flat.chi, &f.verdict))
            .collect(),
    })
}

fn render_check(report: &CheckReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("instance: {}\n", report.instance));
    out.push_str(&format!("well-spaced: {}\n", report.well_spaced));
    if let Some(s) = report.speyer {
        out.push_str(&format!("speyer: {s}\n"));
    }
    if report.degenerate_warning {
        out.push_str("warning: some projection is globally constant\n");
    }
    if report.image_reading_differs {
        out.push_str(
            "warning: verdict differs under the image-coincidence reading of flag bases\n",
        );
    }
    out.push_str(&format!("flats tested: {}\n", report.flats.len()));
    for (i, f) in report.flats.iter().enumerate() {
        let chi = f.chi.join(",");
        let summary = if f.neighborhood_moves {
            "circuit not contracted".to_string()
        } else if f.globally_constant {
            "projection constant".to_string()
        } else {
            format!(
                "min distance {} attained {} times at {} vertex(es)",
                f.min_distance.as_deref().unwrap_or("-"),
                f.min_count,
                f.min_base_count
            )
        };
        out.push_str(&format!(
            "flat {i}: chi=({chi}) -> {} ({summary})\n",
            if f.well_spaced {
                "well-spaced"
            } else {
                "not well-spaced"
            },
        ));
    }
    out
}

/// `check <instance.json>`: decide well-spacedness; exit 0/1/2.
pub fn run_check(path: &Path, opts: &CheckOptions) -> CliOutcome {
    match check_inner(path, opts) {
        Ok(outcome) => outcome,
        Err(e) => CliOutcome {
            exit_code: EXIT_INVALID,
            stdout: format!("error: {e}\n"),
        },
    }
}

fn check_inner(path: &Path, opts: &CheckOptions) -> Result<CliOutcome, TropError> {
    let inst = parse_instance(path)?;
    let map = inst.map.as_ref().ok_or_else(|| {
        TropError::InvalidInstance(format!("{}: no map section to check", inst.name))
    })?;
    let report = report_for(map, &inst.name, opts)?;
    if let Some(report_path) = &opts.report {
        let mut text = serde_json::to_string_pretty(&report)?;
        text.push('\n');
        std::fs::write(report_path, text)?;
    }
    let code = if report.well_spaced { EXIT_YES } else { EXIT_NO };
    Ok(CliOutcome {
        exit_code: code,
        stdout: render_check(&report),
    })
}

/// `check --batch <dir>`: check every `*.json`, in name order. Exit code is
/// the worst over the files. Parallelism is capped by `TROP1_THREADS`.
pub fn run_check_batch(dir: &Path, opts: &CheckOptions) -> CliOutcome {
    let mut files: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(entries) => entries
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect(),
        Err(e) => {
            return CliOutcome {
                exit_code: EXIT_INVALID,
                stdout: format!("error: {}: {e}\n", dir.display()),
            }
        }
    };
    files.sort();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(batch_threads())
        .build()
        .expect("thread pool");
    let results: Vec<(PathBuf, CliOutcome)> = pool.install(|| {
        use rayon::prelude::*;
        files
            .par_iter()
            .map(|f| (f.clone(), run_check(f, opts)))
            .collect()
    });
    let mut out = String::new();
    let mut worst = EXIT_YES;
    for (f, r) in &results {
        let status = match r.exit_code {
            0 => "well-spaced",
            1 => "not well-spaced",
            _ => "invalid",
        };
        out.push_str(&format!(
            "{}: {status}\n",
            f.file_name().unwrap_or_default().to_string_lossy()
        ));
        worst = worst.max(r.exit_code);
    }
    CliOutcome { exit_code: worst, stdout: out }
}

fn batch_threads() -> usize {
    std::env::var("TROP1_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Parses `--chi "c1,c2,...,cr"`.
pub fn parse_chi(text: &str) -> Result<RatVec, TropError> {
    let coords = text
        .split(',')
        .map(|c| parse_rat(c.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RatVec(coords))
}

// --------------------------------------------------------------- moduli --

#[derive(Serialize, Deserialize)]
pub struct RecessionFile {
    pub schema_version: u32,
    pub ambient_dim: usize,
    #[serde(default = "default_genus")]
    pub genus: u32,
    pub legs: Vec<RecessionLegDto>,
}

fn default_genus() -> u32 {
    1
}

#[derive(Serialize, Deserialize)]
pub struct RecessionLegDto {
    pub marking: u32,
    pub u: Vec<i64>,
    pub w: u64,
}

pub fn parse_recession(path: &Path) -> Result<RecessionType, TropError> {
    let text = std::fs::read_to_string(path)?;
    let file: RecessionFile = serde_json::from_str(&text)
        .map_err(|e| TropError::Parse(format!("{}: {e}", path.display())))?;
    if file.schema_version != crate::instance::SCHEMA_VERSION {
        return Err(TropError::InvalidInstance(format!(
            "unknown schema_version {}",
            file.schema_version
        )));
    }
    let mut legs = file
        .legs
        .iter()
        .map(|l| Ok((l.marking, ContactOrder::new(RatVec::from_ints(&l.u), l.w)?)))
        .collect::<Result<Vec<_>, TropError>>()?;
    legs.sort_by_key(|(m, _)| *m);
    Ok(RecessionType {
        ambient_dim: file.ambient_dim,
        genus: file.genus,
        legs,
    })
}

pub struct ModuliOptions {
    pub max_vertices: usize,
    pub out: Option<PathBuf>,
    pub dot: Option<PathBuf>,
    pub well_spaced_only: bool,
}

/// `moduli --recession <file> --max-vertices K --out complex.json`:
/// enumerate all radial types over the recession type, assemble the
/// generalized cone complex, and write it.
pub fn run_moduli(recession_path: &Path, opts: &ModuliOptions) -> CliOutcome {
    match moduli_inner(recession_path, opts) {
        Ok(o) => o,
        Err(e) => CliOutcome {
            exit_code: EXIT_INVALID,
            stdout: format!("error: {e}\n"),
        },
    }
}

fn moduli_inner(recession_path: &Path, opts: &ModuliOptions) -> Result<CliOutcome, TropError> {
    let recession = parse_recession(recession_path)?;
    let types = enumerate_types(&recession, opts.max_vertices)?;
    let mut radial = Vec::new();
    for ty in &types {
        for alignment in ty.graph.enumerate_alignments()? {
            radial.push(RadialType { ty: ty.clone(), alignment });
        }
    }
    let complex = assemble_complex(&radial, None)?;
    let complex = if opts.well_spaced_only {
        well_spaced_subcomplex(&complex)?
    } else {
        complex
    };
    let stats = complex.stats();
    let mut out = String::new();
    out.push_str(&format!("types: {}\n", types.len()));
    out.push_str(&format!("cells: {}\n", complex.cells.len()));
    out.push_str(&format!("arrows: {}\n", complex.arrows.len()));
    let dims: Vec<String> = stats
        .cells_by_dim
        .iter()
        .map(|(d, c)| format!("{d}: {c}"))
        .collect();
    out.push_str(&format!("cells by dim: {{{}}}\n", dims.join(", ")));
    out.push_str(&format!(
        "maximal dims: {:?}\npure: {}\n",
        stats.maximal_dims, stats.pure
    ));
    if let Some(path) = &opts.out {
        std::fs::write(path, complex_to_json(&complex)?)?;
    }
    if let Some(path) = &opts.dot {
        std::fs::write(path, complex_to_dot(&complex))?;
    }
    Ok(CliOutcome::ok(out))
}

// ---------------------------------------------------- complex formats ----

#[derive(Serialize, Deserialize)]
pub struct ComplexFile {
    pub schema_version: u32,
    pub cells: Vec<CellDto>,
    pub arrows: Vec<ArrowDto>,
}

#[derive(Serialize, Deserialize)]
pub struct CellDto {
    pub id: usize,
    pub dim: usize,
    pub vertices: Vec<CellVertexDto>,
    pub edges: Vec<CellEdgeDto>,
    pub legs: Vec<CellLegDto>,
    /// Alignment blocks from the circuit outward, by vertex id.
    pub alignment: Vec<Vec<String>>,
    pub cone: ConeDto,
}

#[derive(Serialize, Deserialize)]
pub struct CellVertexDto {
    pub id: String,
    pub genus: u32,
}

#[derive(Serialize, Deserialize)]
pub struct CellEdgeDto {
    pub id: String,
    pub ends: [String; 2],
    pub u: Vec<i64>,
    pub w: u64,
}

#[derive(Serialize, Deserialize)]
pub struct CellLegDto {
    pub id: String,
    pub base: String,
    pub marking: u32,
    pub u: Vec<i64>,
    pub w: u64,
}

#[derive(Serialize, Deserialize)]
pub struct ConeDto {
    pub vars: Vec<String>,
    pub eqs: Vec<Vec<String>>,
    pub ineqs: Vec<IneqDto>,
    /// Canonical (reduced row echelon) basis of the cone's linear span.
    pub span_basis: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
pub struct IneqDto {
    pub form: Vec<String>,
    pub strict: bool,
}

#[derive(Serialize, Deserialize)]
pub struct ArrowDto {
    pub face: usize,
    pub cell: usize,
    pub contracted_edges: Vec<String>,
    pub vertex_map: BTreeMap<String, String>,
}

pub fn complex_to_json(complex: &ConeComplex) -> Result<String, TropError> {
    let fmt_vec = |v: &RatVec| -> Vec<String> { v.0.iter().map(format_rat).collect() };
    let int_vec = |v: &RatVec| -> Vec<i64> {
        v.0.iter()
            .map(|x| x.to_integer().try_into().expect("small direction"))
            .collect()
    };
    let cells = complex
        .cells
        .iter()
        .enumerate()
        .map(|(id, cell)| {
            let g = &cell.radial.ty.graph;
            CellDto {
                id,
                dim: cell.dim,
                vertices: g
                    .vertices
                    .iter()
                    .map(|v| CellVertexDto { id: v.name.clone(), genus: v.genus })
                    .collect(),
                edges: g
                    .edges
                    .iter()
                    .zip(&cell.radial.ty.edge_dirs)
                    .map(|(e, co)| CellEdgeDto {
                        id: e.name.clone(),
                        ends: [
                            g.vertices[e.ends.0 .0].name.clone(),
                            g.vertices[e.ends.1 .0].name.clone(),
                        ],
                        u: int_vec(&co.u),
                        w: co.w,
                    })
                    .collect(),
                legs: g
                    .legs
                    .iter()
                    .zip(&cell.radial.ty.leg_dirs)
                    .map(|(l, co)| CellLegDto {
                        id: l.name.clone(),
                        base: g.vertices[l.base.0].name.clone(),
                        marking: l.marking,
                        u: int_vec(&co.u),
                        w: co.w,
                    })
                    .collect(),
                alignment: cell
                    .radial
                    .alignment
                    .blocks()
                    .iter()
                    .map(|block| {
                        block
                            .iter()
                            .map(|&v| g.vertices[v.0].name.clone())
                            .collect()
                    })
                    .collect(),
                cone: ConeDto {
                    vars: cell.cone.vars.clone(),
                    eqs: cell.cone.eqs.iter().map(fmt_vec).collect(),
                    ineqs: cell
                        .cone
                        .ineqs
                        .iter()
                        .map(|(f, strict)| IneqDto { form: fmt_vec(f), strict: *strict })
                        .collect(),
                    span_basis: cell.cone.span().basis().iter().map(fmt_vec).collect(),
                },
            }
        })
        .collect();
    let arrows = complex
        .arrows
        .iter()
        .map(|a| {
            let fine = &complex.cells[a.cell].radial.ty.graph;
            let coarse = &complex.cells[a.face].radial.ty.graph;
            ArrowDto {
                face: a.face,
                cell: a.cell,
                contracted_edges: a.contracted_edges.clone(),
                vertex_map: fine
                    .vertices
                    .iter()
                    .zip(&a.vertex_map)
                    .map(|(v, &img)| (v.name.clone(), coarse.vertices[img].name.clone()))
                    .collect(),
            }
        })
        .collect();
    let file = ComplexFile {
        schema_version: crate::instance::SCHEMA_VERSION,
        cells,
        arrows,
    };
    let mut text = serde_json::to_string_pretty(&file)?;
    text.push('\n');
    Ok(text)
}

/// DOT face poset: one node per cell, one arrow from each face into the
/// cell it bounds.
pub fn complex_to_dot(complex: &ConeComplex) -> String {
    let mut out = String::from("digraph face_poset {\n  rankdir=BT;\n");
    for (i, cell) in complex.cells.iter().enumerate() {
        let blocks: Vec<String> = cell
            .radial
            .alignment
            .blocks()
            .iter()
            .map(|b| {
                let names: Vec<&str> = b
                    .iter()
                    .map(|&v| cell.radial.ty.graph.vertices[v.0].name.as_str())
                    .collect();
                names.join(",")
            })
            .collect();
        out.push_str(&format!(
            "  c{i} [label=\"#{i} dim {}\\n{}\"];\n",
            cell.dim,
            blocks.join(" < ")
        ));
    }
    for a in &complex.arrows {
        out.push_str(&format!("  c{} -> c{};\n", a.face, a.cell));
    }
    out.push_str("}\n");
    out
}

// -------------------------------------------------------------- descent --

#[derive(Serialize, Deserialize)]
pub struct DescentInstanceFile {
    pub schema_version: u32,
    pub parts: Vec<Vec<usize>>,
    pub slopes: Vec<i64>,
    pub points: Vec<String>,
    pub constants: Vec<String>,
}

pub fn parse_descent_instance(path: &Path) -> Result<DescentInstance, TropError> {
    let text = std::fs::read_to_string(path)?;
    let file: DescentInstanceFile = serde_json::from_str(&text)
        .map_err(|e| TropError::Parse(format!("{}: {e}", path.display())))?;
    if file.schema_version != crate::instance::SCHEMA_VERSION {
        return Err(TropError::InvalidInstance(format!(
            "unknown schema_version {}",
            file.schema_version
        )));
    }
    let points = file
        .points
        .iter()
        .map(|p| parse_rat(p))
        .collect::<Result<Vec<_>, _>>()?;
    let constants = file
        .constants
        .iter()
        .map(|c| parse_rat(c))
        .collect::<Result<Vec<_>, _>>()?;
    let inst = DescentInstance {
        parts: file.parts,
        slopes: file.slopes,
        points,
        constants,
    };
    inst.validate()?;
    Ok(inst)
}

/// Parses `--parts "2:1,-1;3:1,1,-2"`: per branch, the size and its slopes.
pub fn parse_parts_spec(spec: &str) -> Result<(Vec<usize>, Vec<i64>), TropError> {
    let mut sizes = Vec::new();
    let mut slopes = Vec::new();
    for part in spec.split(';') {
        let (size, rest) = part.split_once(':').ok_or_else(|| {
            TropError::Parse(format!("part {part:?} is not of the form SIZE:a1,a2,..."))
        })?;
        let size: usize = size
            .trim()
            .parse()
            .map_err(|_| TropError::Parse(format!("bad part size {size:?}")))?;
        let list: Vec<i64> = rest
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<i64>()
                    .map_err(|_| TropError::Parse(format!("bad slope {a:?}")))
            })
            .collect::<Result<_, _>>()?;
        if list.len() != size {
            return Err(TropError::Parse(format!(
                "part {part:?} declares {size} slopes but lists {}",
                list.len()
            )));
        }
        sizes.push(size);
        slopes.extend(list);
    }
    Ok((sizes, slopes))
}

/// Parses `--c "1,-8"`.
pub fn parse_constants(spec: &str) -> Result<Vec<Rat>, TropError> {
    spec.split(',').map(|c| parse_rat(c.trim())).collect()
}

/// `descent --instance <file>`: evaluate the residue condition; exit 0 when
/// the configuration descends.
pub fn run_descent_instance(path: &Path) -> CliOutcome {
    match descent_instance_inner(path) {
        Ok(o) => o,
        Err(e) => CliOutcome {
            exit_code: EXIT_INVALID,
            stdout: format!("error: {e}\n"),
        },
    }
}

fn descent_instance_inner(path: &Path) -> Result<CliOutcome, TropError> {
    let inst = parse_descent_instance(path)?;
    let b = inst.linear_parts()?;
    let descends = inst.descends()?;
    let mut out = String::new();
    for (j, bj) in b.iter().enumerate() {
        out.push_str(&format!("b_{j} = {}\n", format_rat(bj)));
    }
    out.push_str(&format!("descends: {descends}\n"));
    Ok(CliOutcome {
        exit_code: if descends { EXIT_YES } else { EXIT_NO },
        stdout: out,
    })
}

/// `descent --search --parts ... --c ...`: search for a descending point
/// configuration; exit 0 when a witness exists, 1 when provably impossible.
pub fn run_descent_search(parts: &str, constants: &str) -> CliOutcome {
    match descent_search_inner(parts, constants) {
        Ok(o) => o,
        Err(e) => CliOutcome {
            exit_code: EXIT_INVALID,
            stdout: format!("error: {e}\n"),
        },
    }
}

fn descent_search_inner(parts: &str, constants: &str) -> Result<CliOutcome, TropError> {
    let (sizes, slopes) = parse_parts_spec(parts)?;
    let constants = parse_constants(constants)?;
    let problem = DescentProblem {
        part_sizes: sizes,
        slopes,
        constants,
    };
    match configuration_exists(&problem)? {
        None => Ok(CliOutcome {
            exit_code: EXIT_NO,
            stdout: "no configuration: a single branch with two points never descends\n"
                .to_string(),
        }),
        Some(witness) => {
            let mut out = String::from("witness found\n");
            for (j, part) in witness.parts.iter().enumerate() {
                let pts: Vec<String> = part
                    .iter()
                    .map(|&i| format_rat(&witness.points[i]))
                    .collect();
                out.push_str(&format!("branch {j}: x = [{}]\n", pts.join(", ")));
            }
            debug_assert!(witness.descends()?);
            Ok(CliOutcome::ok(out))
        }
    }
}

// --------------------------------------------------------------- export --

pub struct ExportOptions {
    pub complex_out: Option<PathBuf>,
    pub dot_out: Option<PathBuf>,
    pub well_spaced_only: bool,
}

/// `export <instance.json>`: radial subdivision of the instance's type,
/// assembled into a complex, written as JSON and DOT.
pub fn run_export(path: &Path, opts: &ExportOptions) -> CliOutcome {
    match export_inner(path, opts) {
        Ok(o) => o,
        Err(e) => CliOutcome {
            exit_code: EXIT_INVALID,
            stdout: format!("error: {e}\n"),
        },
    }
}

fn export_inner(path: &Path, opts: &ExportOptions) -> Result<CliOutcome, TropError> {
    let inst = parse_instance(path)?;
    let map = inst.map.as_ref().ok_or_else(|| {
        TropError::InvalidInstance(format!("{}: no map section to export", inst.name))
    })?;
    let fan = inst.fan.as_ref();
    let cells = radial_subdivision(&map.ty, fan)?;
    let radial: Vec<RadialType> = cells
        .into_iter()
        .map(|(alignment, _)| RadialType { ty: map.ty.clone(), alignment })
        .collect();
    let complex = assemble_complex(&radial, fan)?;
    let complex = if opts.well_spaced_only {
        well_spaced_subcomplex(&complex)?
    } else {
        complex
    };
    let stats = complex.stats();
    let mut out = String::new();
    out.push_str(&format!("instance: {}\n", inst.name));
    out.push_str(&format!(
        "superabundant: {}\n",
        is_superabundant(&map.ty, fan)?
    ));
    out.push_str(&format!(
        "cells: {}\narrows: {}\npure: {}\n",
        complex.cells.len(),
        complex.arrows.len(),
        stats.pure
    ));
    if let Some(p) = &opts.complex_out {
        std::fs::write(p, complex_to_json(&complex)?)?;
    }
    if let Some(p) = &opts.dot_out {
        std::fs::write(p, complex_to_dot(&complex))?;
    }
    Ok(CliOutcome::ok(out))
}

// --------------------------------------------------------------- corpus --

/// `corpus [--out dir]`: list the bundled instances, optionally writing
/// them out as JSON files.
pub fn run_corpus(out_dir: Option<&Path>) -> CliOutcome {
    let mut out = String::new();
    for (name, inst) in crate::corpus::bundled() {
        out.push_str(&format!("{name}\n"));
        if let Some(dir) = out_dir {
            if let Err(e) = std::fs::create_dir_all(dir)
                .map_err(TropError::from)
                .and_then(|()| {
                    std::fs::write(dir.join(name), serialize_instance(&inst))
                        .map_err(TropError::from)
                })
            {
                return CliOutcome {
                    exit_code: EXIT_INVALID,
                    stdout: format!("error: {e}\n"),
                };
            }
        }
    }
    CliOutcome::ok(out)
}

/// Checks a map held in memory (shared by tests).
pub fn check_map(
    map: &TropicalMap,
    name: &str,
    opts: &CheckOptions,
) -> Result<CheckReport, TropError> {
    report_for(map, name, opts)
}

/// Checks an in-memory instance.
pub fn check_instance(inst: &Instance, opts: &CheckOptions) -> Result<CheckReport, TropError> {
    let map = inst.map.as_ref().ok_or_else(|| {
        TropError::InvalidInstance(format!("{}: no map section to check", inst.name))
    })?;
    report_for(map, &inst.name, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rint;

    fn write_temp(name: &str, text: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("trop1-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(name);
        std::fs::write(&path, text).unwrap();
        path
    }

    #[test]
    fn check_exit_codes_on_corpus() {
        let ws = crate::corpus::fig4(rint(1), rint(1));
        let not_ws = crate::corpus::fig4(rint(1), rint(2));
        let p1 = write_temp("eq.json", &serialize_instance(&ws));
        let p2 = write_temp("ne.json", &serialize_instance(&not_ws));
        let opts = CheckOptions::default();
        assert_eq!(run_check(&p1, &opts).exit_code, EXIT_YES);
        assert_eq!(run_check(&p2, &opts).exit_code, EXIT_NO);
        let bad = write_temp("bad.json", "{ nope");
        assert_eq!(run_check(&bad, &opts).exit_code, EXIT_INVALID);
    }

    #[test]
    fn check_is_deterministic() {
        let inst = crate::corpus::fig5(rint(1), rint(2));
        let p = write_temp("fig5det.json", &serialize_instance(&inst));
        let opts = CheckOptions { speyer: true, ..Default::default() };
        let a = run_check(&p, &opts);
        let b = run_check(&p, &opts);
        assert_eq!(a.stdout, b.stdout);
        assert!(a.stdout.contains("well-spaced: true"));
        assert!(a.stdout.contains("speyer: false"));
    }

    #[test]
    fn check_single_character() {
        let inst = crate::corpus::fig4(rint(1), rint(2));
        let p = write_temp("fig4chi.json", &serialize_instance(&inst));
        // horizontal character does not contract the circuit
        let opts = CheckOptions {
            chi: Some(parse_chi("1,0").unwrap()),
            ..Default::default()
        };
        assert_eq!(run_check(&p, &opts).exit_code, EXIT_YES);
        // vertical character sees the imbalance
        let opts = CheckOptions {
            chi: Some(parse_chi("0,1").unwrap()),
            ..Default::default()
        };
        assert_eq!(run_check(&p, &opts).exit_code, EXIT_NO);
    }

    #[test]
    fn export_writes_dot_with_one_node_per_cell() {
        let inst = crate::corpus::fig5(rint(1), rint(2));
        let p = write_temp("fig5exp.json", &serialize_instance(&inst));
        let dir = p.parent().unwrap().to_path_buf();
        let dot_path = dir.join("fig5.dot");
        let json_path = dir.join("fig5complex.json");
        let out = run_export(
            &p,
            &ExportOptions {
                complex_out: Some(json_path.clone()),
                dot_out: Some(dot_path.clone()),
                well_spaced_only: false,
            },
        );
        assert_eq!(out.exit_code, EXIT_YES);
        let dot = std::fs::read_to_string(&dot_path).unwrap();
        assert_eq!(dot.matches("label=").count(), 3);
        let json = std::fs::read_to_string(&json_path).unwrap();
        let parsed: ComplexFile = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.cells.len(), 3);
    }

    #[test]
    fn descent_search_roundtrip() {
        let found = run_descent_search("2:2,-2;2:1,-1", "1,-8");
        assert_eq!(found.exit_code, EXIT_YES);
        let impossible = run_descent_search("2:1,-1", "1");
        assert_eq!(impossible.exit_code, EXIT_NO);
        let invalid = run_descent_search("2:1,2", "1");
        assert_eq!(invalid.exit_code, EXIT_INVALID);
    }

    #[test]
    fn corpus_listing() {
        let out = run_corpus(None);
        assert_eq!(out.exit_code, EXIT_YES);
        assert!(out.stdout.contains("fig2.json"));
        assert!(out.stdout.contains("fig5_reversed.json"));
    }
}
