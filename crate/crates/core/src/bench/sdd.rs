//! Dataset directory tree.
//!
//! ```text
//! root/
//!   non-parametric/polynomial/<id>/sys.txt [output.txt solution.txt info.txt]
//!   non-parametric/non-polynomial/<id>/...
//!   parametric/<family>/parameter.txt parametricSys.txt
//!   parametric/<family>/instances/<id>/...
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use super::format::{OutputFile, SolutionFile};
use super::BenchError;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Category {
    Polynomial,
    NonPolynomial,
    Family(String),
}

impl Category {
    pub fn label(&self) -> &str {
        match self {
            Category::Polynomial => "polynomial",
            Category::NonPolynomial => "non-polynomial",
            Category::Family(f) => f,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SddInstance {
    /// Path of the instance directory relative to the root, `/`-separated.
    pub id: String,
    pub category: Category,
    pub sys_text: String,
    pub output: Option<OutputFile>,
    pub solution: Option<SolutionFile>,
    pub info: Option<String>,
}

impl SddInstance {
    pub fn new(id: impl Into<String>, category: Category, sys_text: impl Into<String>) -> SddInstance {
        SddInstance { id: id.into(), category, sys_text: sys_text.into(), output: None, solution: None, info: None }
    }

    pub fn dir(&self, root: &Path) -> PathBuf {
        self.id.split('/').fold(root.to_path_buf(), |p, c| p.join(c))
    }

    pub fn system(&self) -> Result<crate::System, crate::expr::ParseError> {
        crate::parse_system(&self.sys_text)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyEntry {
    pub name: String,
    pub parameter: Option<String>,
    pub parametric_sys: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Skipped {
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SddTree {
    pub instances: Vec<SddInstance>,
    pub families: Vec<FamilyEntry>,
    pub skipped: Vec<Skipped>,
}

pub const NON_PARAMETRIC: &str = "non-parametric";
pub const PARAMETRIC: &str = "parametric";

fn sorted_subdirs(dir: &Path) -> Result<Vec<PathBuf>, std::io::Error> {
    let mut out = Vec::new();
    for e in fs::read_dir(dir)? {
        let e = e?;
        if e.file_type()?.is_dir() {
            out.push(e.path());
        }
    }
    out.sort();
    Ok(out)
}

fn read_optional(path: &Path) -> Result<Option<String>, String> {
    if !path.exists() {
        return Ok(None);
    }
    fs::read_to_string(path).map(Some).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_instance(dir: &Path, id: String, category: Category) -> Result<SddInstance, String> {
    let sys = dir.join("sys.txt");
    if !sys.is_file() {
        return Err("no sys.txt".into());
    }
    let sys_text = fs::read_to_string(&sys).map_err(|e| format!("sys.txt: {e}"))?;
    crate::parse_system(&sys_text).map_err(|e| format!("sys.txt: {e}"))?;
    let output = read_optional(&dir.join("output.txt"))?
        .map(|t| OutputFile::parse(&t))
        .transpose()
        .map_err(|e| e.to_string())?;
    let solution = read_optional(&dir.join("solution.txt"))?
        .map(|t| SolutionFile::parse(&t))
        .transpose()
        .map_err(|e| e.to_string())?;
    let info = read_optional(&dir.join("info.txt"))?;
    Ok(SddInstance { id, category, sys_text, output, solution, info })
}

fn dir_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Reads every instance under `root`. Malformed entries are listed in
/// `skipped` instead of failing the load.
pub fn load_sdd(root: &Path) -> Result<SddTree, BenchError> {
    if !root.is_dir() {
        return Err(BenchError::MissingRoot(root.to_path_buf()));
    }
    let mut tree = SddTree::default();
    let visit = |tree: &mut SddTree, dir: PathBuf, id: String, cat: Category| match load_instance(&dir, id, cat) {
        Ok(inst) => tree.instances.push(inst),
        Err(reason) => tree.skipped.push(Skipped { path: dir, reason }),
    };
    let np = root.join(NON_PARAMETRIC);
    for (sub, cat) in [("polynomial", Category::Polynomial), ("non-polynomial", Category::NonPolynomial)] {
        let d = np.join(sub);
        if d.is_dir() {
            for inst in sorted_subdirs(&d)? {
                let id = format!("{NON_PARAMETRIC}/{sub}/{}", dir_name(&inst));
                visit(&mut tree, inst, id, cat.clone());
            }
        }
    }
    let pd = root.join(PARAMETRIC);
    if pd.is_dir() {
        for fam in sorted_subdirs(&pd)? {
            let name = dir_name(&fam);
            let entry = FamilyEntry {
                name: name.clone(),
                parameter: read_optional(&fam.join("parameter.txt")).map_err(BenchError::Other)?,
                parametric_sys: read_optional(&fam.join("parametricSys.txt")).map_err(BenchError::Other)?,
            };
            tree.families.push(entry);
            let inst_dir = fam.join("instances");
            if !inst_dir.is_dir() {
                tree.skipped.push(Skipped { path: fam, reason: "family without instances/".into() });
                continue;
            }
            for inst in sorted_subdirs(&inst_dir)? {
                let id = format!("{PARAMETRIC}/{name}/instances/{}", dir_name(&inst));
                visit(&mut tree, inst, id, Category::Family(name.clone()));
            }
        }
    }
    Ok(tree)
}

/// Writes `tree` under `root`, creating directories as needed.
pub fn write_sdd(tree: &SddTree, root: &Path) -> Result<(), BenchError> {
    for fam in &tree.families {
        let d = root.join(PARAMETRIC).join(&fam.name);
        fs::create_dir_all(d.join("instances"))?;
        if let Some(t) = &fam.parameter {
            fs::write(d.join("parameter.txt"), t)?;
        }
        if let Some(t) = &fam.parametric_sys {
            fs::write(d.join("parametricSys.txt"), t)?;
        }
    }
    for inst in &tree.instances {
        write_instance(inst, root)?;
    }
    Ok(())
}

pub fn write_instance(inst: &SddInstance, root: &Path) -> Result<(), BenchError> {
    let d = inst.dir(root);
    fs::create_dir_all(&d)?;
    fs::write(d.join("sys.txt"), &inst.sys_text)?;
    if let Some(o) = &inst.output {
        fs::write(d.join("output.txt"), o.to_text())?;
    }
    if let Some(s) = &inst.solution {
        fs::write(d.join("solution.txt"), s.to_text())?;
    }
    if let Some(i) = &inst.info {
        fs::write(d.join("info.txt"), i)?;
    }
    Ok(())
}
