//! Parametric bridge generators: textbook comparators, museum replica
//! configurations and corrected variants.

mod generate;
mod strip;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::ModelError;

pub use generate::{generate, deck_node_count, RIVERBED_DEPTH, ROPE_AREA};
pub use strip::strip_to_bare_deck;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("invalid bridge spec: {0}")]
    InvalidSpec(String),
    #[error("not a replica model: {0}")]
    NotAReplica(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BridgeKind {
    BeamBridge,
    CantileverBridge,
    SuspensionBridge,
    TrussBridge,
    CableStayedBridge,
    /// Pillars standing on the deck, roped back to the deck.
    LeonardoReplica,
    /// Replica layout whose pillars continue down to fixed riverbed footings.
    LeonardoGrounded,
}

impl BridgeKind {
    pub const ALL: [BridgeKind; 7] = [
        BridgeKind::BeamBridge,
        BridgeKind::CantileverBridge,
        BridgeKind::SuspensionBridge,
        BridgeKind::TrussBridge,
        BridgeKind::CableStayedBridge,
        BridgeKind::LeonardoReplica,
        BridgeKind::LeonardoGrounded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BridgeKind::BeamBridge => "beam",
            BridgeKind::CantileverBridge => "cantilever",
            BridgeKind::SuspensionBridge => "suspension",
            BridgeKind::TrussBridge => "truss",
            BridgeKind::CableStayedBridge => "cable-stayed",
            BridgeKind::LeonardoReplica => "replica",
            BridgeKind::LeonardoGrounded => "grounded",
        }
    }
}

impl fmt::Display for BridgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BridgeKind {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        let alias = match key.as_str() {
            "beambridge" | "beam-bridge" => "beam",
            "cantileverbridge" | "cantilever-bridge" => "cantilever",
            "suspensionbridge" | "suspension-bridge" => "suspension",
            "trussbridge" | "truss-bridge" => "truss",
            "cablestayed" | "cablestayedbridge" | "cable-stayed-bridge" => "cable-stayed",
            "leonardoreplica" | "leonardo-replica" => "replica",
            "leonardogrounded" | "leonardo-grounded" => "grounded",
            other => other,
        };
        BridgeKind::ALL
            .into_iter()
            .find(|k| k.name() == alias)
            .ok_or_else(|| CatalogError::InvalidSpec(format!("unknown bridge kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Wheels {
    None,
    RightOnly,
    BothSides,
}

impl FromStr for Wheels {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Wheels::None),
            "right" | "rightonly" | "right-only" => Ok(Wheels::RightOnly),
            "both" | "bothsides" | "both-sides" => Ok(Wheels::BothSides),
            _ => Err(CatalogError::InvalidSpec(format!("unknown wheels option `{s}`"))),
        }
    }
}

/// Parametric bridge description. Dimensions are SI.
#[derive(Debug, Clone, PartialEq)]
pub struct BridgeSpec {
    pub kind: BridgeKind,
    pub span: f64,
    pub deck_segments: usize,
    pub pillar_count: usize,
    /// Pillar height above the deck; also the truss depth and pier height.
    pub pillar_height: f64,
    pub wheels: Wheels,
    pub wheel_mass: f64,
    pub mid_support: bool,
    pub crosswise_top_ropes: bool,
    /// Hang the pillars below the deck instead of standing them on it.
    pub posts_below: bool,
    /// Uniform deck load on every deck segment (N/m, downward), on top of
    /// self-weight.
    pub deck_load: f64,
    pub deck_material: String,
    pub deck_section: String,
    pub pillar_section: String,
    pub rope_material: String,
}

impl BridgeSpec {
    /// Defaults for `kind`: 12 m span, 1.5 m pillars, 300 kg wheels, one
    /// deck segment per pillar bay.
    pub fn new(kind: BridgeKind, pillar_count: usize) -> Self {
        let deck_segments = match kind {
            BridgeKind::LeonardoReplica | BridgeKind::LeonardoGrounded => pillar_count + 1,
            _ => 12,
        };
        Self {
            kind,
            span: 12.0,
            deck_segments,
            pillar_count,
            pillar_height: 1.5,
            wheels: Wheels::None,
            wheel_mass: 300.0,
            mid_support: false,
            crosswise_top_ropes: false,
            posts_below: false,
            deck_load: 0.0,
            deck_material: "timber".into(),
            deck_section: "deck".into(),
            pillar_section: "pillar".into(),
            rope_material: "hemp-rope".into(),
        }
    }

    pub fn with_wheels(mut self, wheels: Wheels) -> Self {
        self.wheels = wheels;
        self
    }

    pub fn with_deck_segments(mut self, n: usize) -> Self {
        self.deck_segments = n;
        self
    }

    pub fn with_deck_load(mut self, w: f64) -> Self {
        self.deck_load = w;
        self
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        let bad = |msg: String| Err(CatalogError::InvalidSpec(msg));
        if !(self.span > 0.0 && self.span.is_finite()) {
            return bad(format!("span must be positive, got {}", self.span));
        }
        if !(self.pillar_height > 0.0 && self.pillar_height.is_finite()) {
            return bad(format!("pillar height must be positive, got {}", self.pillar_height));
        }
        if !(self.wheel_mass >= 0.0 && self.wheel_mass.is_finite()) {
            return bad(format!("wheel mass must be non-negative, got {}", self.wheel_mass));
        }
        if !(self.deck_load >= 0.0 && self.deck_load.is_finite()) {
            return bad(format!("deck load must be non-negative, got {}", self.deck_load));
        }
        if self.deck_segments < self.pillar_count + 1 {
            return bad(format!(
                "{} deck segments cannot carry {} pillars",
                self.deck_segments, self.pillar_count
            ));
        }
        let min_segments = match self.kind {
            BridgeKind::CantileverBridge => 4,
            BridgeKind::TrussBridge | BridgeKind::SuspensionBridge | BridgeKind::CableStayedBridge => 2,
            _ => 1,
        };
        if self.deck_segments < min_segments {
            return bad(format!("{} needs at least {min_segments} deck segments", self.kind));
        }
        if self.mid_support && !self.deck_segments.is_multiple_of(2) {
            return bad("a mid support needs an even number of deck segments".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PresetId {
    LeonardoDrawing,
    Florence,
    Grande,
    AmboiseScale,
    AmboisePark,
    BareDeck,
    GroundedStayed,
    Underslung,
}

impl PresetId {
    pub const ALL: [PresetId; 8] = [
        PresetId::LeonardoDrawing,
        PresetId::Florence,
        PresetId::Grande,
        PresetId::AmboiseScale,
        PresetId::AmboisePark,
        PresetId::BareDeck,
        PresetId::GroundedStayed,
        PresetId::Underslung,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresetId::LeonardoDrawing => "LEONARDO_DRAWING",
            PresetId::Florence => "FLORENCE",
            PresetId::Grande => "GRANDE",
            PresetId::AmboiseScale => "AMBOISE_SCALE",
            PresetId::AmboisePark => "AMBOISE_PARK",
            PresetId::BareDeck => "BARE_DECK",
            PresetId::GroundedStayed => "GROUNDED_STAYED",
            PresetId::Underslung => "UNDERSLUNG",
        }
    }

    pub fn spec(self) -> BridgeSpec {
        use BridgeKind::*;
        match self {
            PresetId::LeonardoDrawing => BridgeSpec::new(LeonardoReplica, 11).with_wheels(Wheels::RightOnly),
            PresetId::Florence => BridgeSpec::new(LeonardoReplica, 6).with_wheels(Wheels::BothSides),
            PresetId::Grande => BridgeSpec::new(LeonardoReplica, 5),
            PresetId::AmboiseScale => BridgeSpec {
                mid_support: true,
                ..BridgeSpec::new(LeonardoReplica, 9)
            },
            PresetId::AmboisePark => BridgeSpec {
                crosswise_top_ropes: true,
                ..BridgeSpec::new(LeonardoReplica, 4)
            },
            PresetId::BareDeck => BridgeSpec::new(BeamBridge, 0),
            PresetId::GroundedStayed => BridgeSpec::new(LeonardoGrounded, 11)
                .with_wheels(Wheels::RightOnly)
                .with_deck_segments(24),
            PresetId::Underslung => BridgeSpec {
                posts_below: true,
                ..BridgeSpec::new(LeonardoReplica, 5).with_deck_segments(12)
            },
        }
    }

    pub fn note(self) -> &'static str {
        match self {
            PresetId::LeonardoDrawing => "Codex Atlanticus f. 855r drawing: eleven pillars, wheels on one side",
            PresetId::Florence => {
                "Le Macchine di Leonardo da Vinci, Florence; Museum of Science and Industry, Chicago: six pillars, wheels both sides"
            }
            PresetId::Grande => "Grande Exhibitions travelling show; Oregon Museum of Science and Industry, Portland: five pillars, no wheels",
            PresetId::AmboiseScale => "Chateau du Clos Luce, Amboise, scale model: nine pillars, small central support",
            PresetId::AmboisePark => "Parc Leonardo da Vinci, Amboise, full-size model: two pillars per side, tops roped crosswise",
            PresetId::BareDeck => "corrected variant: the deck beam alone",
            PresetId::GroundedStayed => "corrected variant: eleven pillars carried down to riverbed footings, ropes to intermediate deck nodes",
            PresetId::Underslung => "corrected variant: five posts hung below the deck, roped to the deck (king-post truss)",
        }
    }
}

impl fmt::Display for PresetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PresetId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_uppercase().replace('-', "_");
        PresetId::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .ok_or_else(|| CatalogError::InvalidSpec(format!("unknown preset `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub id: PresetId,
    pub spec: BridgeSpec,
    pub note: &'static str,
}

/// All presets in a stable order.
pub fn presets() -> Vec<Preset> {
    PresetId::ALL
        .into_iter()
        .map(|id| Preset {
            id,
            spec: id.spec(),
            note: id.note(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_names_round_trip() {
        for p in PresetId::ALL {
            assert_eq!(p.name().parse::<PresetId>().unwrap(), p);
        }
        assert_eq!("grande".parse::<PresetId>().unwrap(), PresetId::Grande);
        assert!("GRAND".parse::<PresetId>().is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for k in BridgeKind::ALL {
            assert_eq!(k.name().parse::<BridgeKind>().unwrap(), k);
        }
        assert_eq!("CableStayedBridge".parse::<BridgeKind>().unwrap(), BridgeKind::CableStayedBridge);
    }

    #[test]
    fn preset_configurations() {
        let drawing = PresetId::LeonardoDrawing.spec();
        assert_eq!((drawing.pillar_count, drawing.wheels), (11, Wheels::RightOnly));
        let florence = PresetId::Florence.spec();
        assert_eq!((florence.pillar_count, florence.wheels), (6, Wheels::BothSides));
        let grande = PresetId::Grande.spec();
        assert_eq!((grande.pillar_count, grande.wheels), (5, Wheels::None));
        let amboise = PresetId::AmboiseScale.spec();
        assert_eq!((amboise.pillar_count, amboise.mid_support), (9, true));
        let park = PresetId::AmboisePark.spec();
        assert_eq!((park.pillar_count, park.crosswise_top_ropes), (4, true));
    }

    #[test]
    fn presets_are_ordered_and_valid() {
        let all = presets();
        assert_eq!(all.len(), PresetId::ALL.len());
        for (p, id) in all.iter().zip(PresetId::ALL) {
            assert_eq!(p.id, id);
            p.spec.validate().unwrap();
            assert!(!p.note.is_empty());
        }
    }

    #[test]
    fn spec_invariants() {
        let mut s = BridgeSpec::new(BridgeKind::LeonardoReplica, 5);
        s.deck_segments = 5;
        assert!(s.validate().is_err());
        let mut s = BridgeSpec::new(BridgeKind::BeamBridge, 0);
        s.span = 0.0;
        assert!(s.validate().is_err());
        let mut s = BridgeSpec::new(BridgeKind::BeamBridge, 0);
        s.wheel_mass = -1.0;
        assert!(s.validate().is_err());
    }
}
