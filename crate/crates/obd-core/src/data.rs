//! Bundled datasets: the arrow table for the Giroux-torsion computation,
//! its killing chain and layered witness, the standard open books used in
//! the examples, and placeholder slots for figure transcriptions that have
//! not been produced yet.
//!
//! Payloads are embedded in the binary; setting `OBD_DATA_DIR` redirects
//! lookups to external files with the same names.

use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DatasetKind {
    OpenBook,
    PageArcs,
    Diagram,
    Complex,
    Chain,
    Witness,
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DatasetKind::OpenBook => "openbook",
            DatasetKind::PageArcs => "page+arcs",
            DatasetKind::Diagram => "diagram",
            DatasetKind::Complex => "complex",
            DatasetKind::Chain => "chain",
            DatasetKind::Witness => "witness",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Dataset {
    pub name: &'static str,
    pub kind: DatasetKind,
    /// Embedded JSON payload; `None` while the dataset still requires
    /// transcription of a published diagram.
    pub payload: Option<&'static str>,
    pub note: &'static str,
}

impl Dataset {
    pub fn requires_transcription(&self) -> bool {
        self.payload.is_none()
    }

    pub fn file_name(&self) -> String {
        format!("{}.json", self.name)
    }
}

macro_rules! bundled {
    ($name:literal) => {
        Some(include_str!(concat!("../../../data/", $name, ".json")))
    };
}

/// Every dataset shipped with the workbench.
pub fn bundled_datasets() -> Vec<Dataset> {
    vec![
        Dataset {
            name: "table1",
            kind: DatasetKind::Complex,
            payload: bundled!("table1"),
            note: "25-domain differential table with J+ weights for the \
                   Giroux torsion neighbourhood complex",
        },
        Dataset {
            name: "paper_chain",
            kind: DatasetKind::Chain,
            payload: bundled!("paper_chain"),
            note: "12-generator chain whose boundary is the contact generator",
        },
        Dataset {
            name: "witness_b012",
            kind: DatasetKind::Witness,
            payload: bundled!("witness_b012"),
            note: "layered chains b0, b1, b2 certifying the order-2 bound",
        },
        Dataset {
            name: "disk_id",
            kind: DatasetKind::OpenBook,
            payload: bundled!("disk_id"),
            note: "(D2, Id): the standard tight S3",
        },
        Dataset {
            name: "annulus_id",
            kind: DatasetKind::OpenBook,
            payload: bundled!("annulus_id"),
            note: "(S1x[0,1], Id): the standard S1xS2",
        },
        Dataset {
            name: "annulus_tau1",
            kind: DatasetKind::OpenBook,
            payload: bundled!("annulus_tau1"),
            note: "(S1x[0,1], tau): positive Hopf band, S3",
        },
        Dataset {
            name: "annulus_tau2",
            kind: DatasetKind::OpenBook,
            payload: bundled!("annulus_tau2"),
            note: "(S1x[0,1], tau^2): RP3",
        },
        Dataset {
            name: "annulus_tau3",
            kind: DatasetKind::OpenBook,
            payload: bundled!("annulus_tau3"),
            note: "(S1x[0,1], tau^3): a lens space with H1 = Z/3",
        },
        Dataset {
            name: "example31_sum",
            kind: DatasetKind::OpenBook,
            payload: bundled!("example31_sum"),
            note: "binding sum of two positive Hopf bands along one \
                   boundary pair, with the two navel twists declared \
                   destabilizable",
        },
        Dataset {
            name: "t3_sum",
            kind: DatasetKind::OpenBook,
            payload: bundled!("t3_sum"),
            note: "binding sum of two trivial annulus open books along \
                   both boundary pairs: a Stein fillable T3",
        },
        Dataset {
            name: "thm1_genus1",
            kind: DatasetKind::OpenBook,
            payload: bundled!("thm1_genus1"),
            note: "binding sum of (Sigma_{1,2}, Id) with a trivial annulus \
                   along both pairs: contact class vanishes",
        },
        Dataset {
            name: "thm1_genus2",
            kind: DatasetKind::OpenBook,
            payload: bundled!("thm1_genus2"),
            note: "binding sum of (Sigma_{2,2}, Id) with a trivial annulus \
                   along both pairs",
        },
        Dataset {
            name: "annulus_page",
            kind: DatasetKind::PageArcs,
            payload: bundled!("annulus_page"),
            note: "annulus as a one-tile cycle with spanning arc, core \
                   twist curve and declared twist region",
        },
        Dataset {
            name: "fig5_t3",
            kind: DatasetKind::PageArcs,
            payload: bundled!("fig5_t3"),
            note: "genus-1 page with 4 boundary circles carrying the 5-arc \
                   basis and the 12 realized navel curves of the T3 \
                   binding sum",
        },
        Dataset {
            name: "fig6to9_torsion",
            kind: DatasetKind::Diagram,
            payload: None,
            note: "requires transcription: nicefied diagram for the \
                   Giroux torsion neighbourhood (5 curves, 18 points on \
                   alpha_1)",
        },
        Dataset {
            name: "fig10_genus1",
            kind: DatasetKind::Diagram,
            payload: None,
            note: "requires transcription: genus-1 non-symmetric sum \
                   diagram carrying the same killing chain",
        },
    ]
}

pub fn find(name: &str) -> Option<Dataset> {
    bundled_datasets().into_iter().find(|d| d.name == name)
}

/// Resolve a dataset payload, honouring the `OBD_DATA_DIR` override.
pub fn read(name: &str) -> Option<String> {
    if let Ok(dir) = std::env::var("OBD_DATA_DIR") {
        let path = std::path::Path::new(&dir).join(format!("{name}.json"));
        if let Ok(s) = std::fs::read_to_string(path) {
            return Some(s);
        }
    }
    find(name).and_then(|d| d.payload.map(str::to_string))
}
