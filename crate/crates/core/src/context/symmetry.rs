use crate::context::{Context, Intermediate, PostSelection, Preparation};
use crate::error::{Error, Result};
use crate::kinematics::{prepare_eigenstate, ProjectiveDecomposition};

/// Labels of the post-selection observable built from a former preparation.
pub const PREPARED_LABEL: &str = "prepared";
pub const NOT_PREPARED_LABEL: &str = "not-prepared";

/// A time-reversed context.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversedContext {
    pub context: Context,
    /// Set when the Hamiltonian is nonzero. The reversal then also
    /// conjugates H, which presumes an instantaneous, time-reversal
    /// invariant intermediate measurement.
    pub convention_dependent: bool,
}

/// Swap preparation and post-selection, complex-conjugate every ket and
/// projector (and the Hamiltonian) and negate all times.
///
/// The post-selected outcome must have rank one so it can serve as a
/// preparation.
pub fn time_reverse_context(ctx: &Context) -> Result<ReversedContext> {
    let mid = ctx.require_intermediate()?;
    let post = ctx.postselection();
    let b = prepare_eigenstate(&post.observable, &post.label)?;
    let a = &ctx.preparation().state;

    let context = Context::new(
        Preparation {
            state: b.conj(),
            time: -post.time,
        },
        Some(Intermediate {
            observable: mid.observable.conj(),
            time: -mid.time,
            performed: mid.performed,
        }),
        PostSelection {
            observable: ProjectiveDecomposition::split_on_state(&a.conj(), PREPARED_LABEL, NOT_PREPARED_LABEL)?,
            label: PREPARED_LABEL.to_string(),
            time: -ctx.preparation().time,
        },
        ctx.hamiltonian().conj(),
    )?;
    Ok(ReversedContext {
        context,
        convention_dependent: !ctx.hamiltonian().is_zero(),
    })
}

/// Exchange the roles of |a⟩ and |b⟩ without conjugation, keeping the
/// times. Only meaningful when nothing evolves between t₁ and t₂.
pub fn interchange_endpoints(ctx: &Context) -> Result<Context> {
    if !ctx.hamiltonian().is_zero() {
        return Err(Error::InvalidContext("endpoint interchange requires a vanishing Hamiltonian".into()));
    }
    let mid = ctx.require_intermediate()?;
    let post = ctx.postselection();
    let b = prepare_eigenstate(&post.observable, &post.label)?;
    Context::new(
        Preparation {
            state: b,
            time: ctx.preparation().time,
        },
        Some(mid.clone()),
        PostSelection {
            observable: ProjectiveDecomposition::split_on_state(
                &ctx.preparation().state,
                PREPARED_LABEL,
                NOT_PREPARED_LABEL,
            )?,
            label: PREPARED_LABEL.to_string(),
            time: post.time,
        },
        ctx.hamiltonian().clone(),
    )
}
