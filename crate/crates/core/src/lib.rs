//! Verification toolkit for cd-structures on finite categories:
//! Grothendieck topologies via minimum covering sieves, completeness,
//! regularity and boundedness checks, set- and abelian-group-valued
//! (pre)sheaves with sheafification, Mayer–Vietoris and cohomological
//! dimension checks, the simplicial objects K_Q with their contracting
//! homotopies, chunky sites with radditivization, and B.G.-style
//! functor towers.

pub mod abelian;
pub mod absheaf;
pub mod bg;
pub mod cech;
pub mod chunky;
pub mod cohomology;
pub mod density;
pub mod fincat;
pub mod fixtures;
pub mod presheaf;
pub mod regular;
pub mod sheaf;
pub mod simplicial;
pub mod space;
pub mod topology;
pub mod util;
