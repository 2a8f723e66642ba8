use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::World;
use crate::corpus::{render_transcript, FormatConfig, ManifestEntry};
use crate::econ::{write_panel_csv, write_prices_csv};
use crate::labels::{write_big5_csv, write_labels_csv, write_votes_csv};
use crate::Result;

impl World {
    /// Writes the world in the on-disk formats read by the rest of the
    /// crate and returns the written paths, relative to `dir`:
    ///
    /// ```text
    /// votes.csv  big5.csv  latent.csv  lexicon.dic  manifest.jsonl  panel.csv
    /// transcripts/<call_id>.txt  prices/<company>.csv
    /// ```
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir.join("transcripts"))?;
        fs::create_dir_all(dir.join("prices"))?;
        let mut written = Vec::new();
        let mut create = |rel: &str| -> Result<fs::File> {
            written.push(PathBuf::from(rel));
            Ok(fs::File::create(dir.join(rel))?)
        };

        write_votes_csv(create("votes.csv")?, &self.votes)?;
        let big5: Vec<_> = self.ceos.iter().filter(|c| c.labeled).map(|c| (c.name.clone(), c.big5)).collect();
        write_big5_csv(create("big5.csv")?, &big5)?;
        let latent: Vec<_> = self.ceos.iter().map(|c| (c.name.clone(), c.traits)).collect();
        write_labels_csv(create("latent.csv")?, &latent)?;
        create("lexicon.dic")?.write_all(self.dictionary.as_bytes())?;

        let fmt = FormatConfig::default();
        let mut manifest = create("manifest.jsonl")?;
        for t in &self.transcripts {
            let rel = format!("transcripts/{}.txt", t.call_id);
            let ceo = self.ceos.iter().find(|c| c.company_id == t.company_id).expect("transcript belongs to a CEO");
            let entry = ManifestEntry {
                path: rel.clone(),
                call_id: Some(t.call_id.clone()),
                ceo: Some(ceo.name.clone()),
                company: Some(t.company_id.clone()),
            };
            writeln!(manifest, "{}", serde_json::to_string(&entry)?)?;
            create(&rel)?.write_all(render_transcript(t, &fmt).as_bytes())?;
        }
        drop(manifest);

        write_panel_csv(create("panel.csv")?, &self.panel)?;
        for (rel, series) in &self.prices {
            write_prices_csv(create(rel)?, series)?;
        }
        written.sort();
        Ok(written)
    }
}
