use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use zonotile::PointConfig;

/// Writes artifacts under `--out` (if given). Stdout handling stays with the
/// commands.
pub struct Artifacts {
    dir: Option<PathBuf>,
}

impl Artifacts {
    pub fn new(dir: Option<&Path>) -> Result<Self> {
        if let Some(d) = dir {
            fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
        }
        Ok(Artifacts {
            dir: dir.map(Path::to_path_buf),
        })
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<()> {
        if let Some(d) = &self.dir {
            let path = d.join(name);
            fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }

    pub fn json(&self, name: &str, value: &serde_json::Value) -> Result<()> {
        self.write(name, &pretty(value))
    }
}

pub fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

/// Header fields recorded in every JSON output.
pub fn header(command: &str, config: &PointConfig) -> serde_json::Map<String, serde_json::Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), command.into());
    m.insert("n".into(), config.n().into());
    m.insert("points".into(), config.to_json()["points"].clone());
    m
}

pub fn points_line(config: &PointConfig) -> String {
    let pts: Vec<String> = config.coords().iter().map(|c| c.to_string()).collect();
    format!("points: {}", pts.join(", "))
}
