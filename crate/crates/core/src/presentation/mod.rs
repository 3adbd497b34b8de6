//! Flat sites and their C-ideal frames, plus a brute-force
//! generators-and-relations path (free frame and congruence quotient) used as
//! an oracle for tiny presentations.

mod congruence;
mod free;
mod present;
mod site;

pub use congruence::quotient_by_congruence;
pub use free::{free_frame, FreeFrame, FREE_FRAME_HARD_CAP};
pub use present::{frame_of_presentation, JoinOfMeets, Presentation, PresentationJson, PresentedFrame, RelationJson};
pub use site::{check_insertion, extend_hom, frame_of_flat_site, FlatSite, FlatSiteJson, HomMode, SiteFrame, StabilityViolation};
