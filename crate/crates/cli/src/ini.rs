//! Minimal INI reader: `[section]` headers, `key = value` lines, `#` or `;`
//! comments. Keys and section names are case-insensitive.

use crate::error::ConfigError;

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    /// 1-based source line; 0 for values injected from the command line.
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ini {
    pub sections: Vec<Section>,
}

impl Ini {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut ini = Ini::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') || s.starts_with(';') {
                continue;
            }
            if let Some(rest) = s.strip_prefix('[') {
                let Some(name) = rest.strip_suffix(']') else {
                    return Err(ConfigError::at(line, format!("malformed section header `{s}`")));
                };
                let name = name.trim().to_ascii_lowercase();
                if name.is_empty() {
                    return Err(ConfigError::at(line, "empty section name"));
                }
                if ini.section(&name).is_some() {
                    return Err(ConfigError::at(line, format!("duplicate section [{name}]")));
                }
                ini.sections.push(Section { name, line, entries: Vec::new() });
                continue;
            }
            let Some((k, v)) = s.split_once('=') else {
                return Err(ConfigError::at(line, format!("expected `key = value`, found `{s}`")));
            };
            let key = k.trim().to_ascii_lowercase();
            if key.is_empty() {
                return Err(ConfigError::at(line, "missing key before `=`"));
            }
            let Some(section) = ini.sections.last_mut() else {
                return Err(ConfigError::at(line, format!("key `{key}` appears before any section")));
            };
            if section.entries.iter().any(|e| e.key == key) {
                return Err(ConfigError::at(line, format!("duplicate key `{key}` in [{}]", section.name)));
            }
            section.entries.push(Entry { key, value: v.trim().to_string(), line });
        }
        Ok(ini)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// Sets `key` in `section`, creating either as needed.
    pub fn set(&mut self, section: &str, key: &str, value: impl Into<String>) {
        let pos = match self.sections.iter().position(|s| s.name == section) {
            Some(p) => p,
            None => {
                self.sections.push(Section { name: section.to_string(), line: 0, entries: Vec::new() });
                self.sections.len() - 1
            }
        };
        let entries = &mut self.sections[pos].entries;
        let entry = Entry { key: key.to_string(), value: value.into(), line: 0 };
        match entries.iter_mut().find(|e| e.key == key) {
            Some(e) => *e = entry,
            None => entries.push(entry),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_comments() {
        let ini = Ini::parse("# top\n[Experiment]\nKind = bench\n\n; note\n[problem]\nfunction= sphere \n").unwrap();
        assert_eq!(ini.sections.len(), 2);
        let e = &ini.section("experiment").unwrap().entries[0];
        assert_eq!((e.key.as_str(), e.value.as_str(), e.line), ("kind", "bench", 3));
        assert_eq!(ini.section("problem").unwrap().entries[0].value, "sphere");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = Ini::parse("[a]\nx = 1\nx = 2\n").unwrap_err();
        assert_eq!(err.line, Some(3));
        assert_eq!(Ini::parse("x = 1").unwrap_err().line, Some(1));
        assert_eq!(Ini::parse("[a]\n[b\n").unwrap_err().line, Some(2));
        assert_eq!(Ini::parse("[a]\njunk\n").unwrap_err().line, Some(2));
    }

    #[test]
    fn set_overrides_or_appends() {
        let mut ini = Ini::parse("[experiment]\nseed = 3\n").unwrap();
        ini.set("experiment", "seed", "9");
        ini.set("experiment", "repeats", "2");
        ini.set("output", "x", "y");
        let exp = ini.section("experiment").unwrap();
        assert_eq!(exp.entries[0].value, "9");
        assert_eq!(exp.entries[0].line, 0);
        assert_eq!(exp.entries[1].key, "repeats");
        assert!(ini.section("output").is_some());
    }
}
