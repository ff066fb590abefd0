use crate::hydro::{Conserved, GasParams, Primitive};

/// Physical flux `(rho u, rho u^2 + p, u (E + p))` of the homogeneous system.
#[inline]
pub fn physical_flux(w: &Primitive, g: &GasParams) -> Conserved {
    let mom = w.rho * w.u;
    let en = w.p / (g.gamma - 1.0) + 0.5 * mom * w.u;
    Conserved { rho: mom, mom: mom * w.u + w.p, en: w.u * (en + w.p) }
}

/// Largest characteristic speed `|u| + c` of a state (zero sound speed in vacuum).
#[inline]
pub fn wave_speed(w: &Primitive, g: &GasParams) -> f64 {
    w.u.abs() + g.sound_speed(w.rho, w.p)
}

/// Local Lax-Friedrichs (Rusanov) flux between two primitive states.
#[inline]
pub fn numerical_flux(left: &Primitive, right: &Primitive, g: &GasParams) -> Conserved {
    let fl = physical_flux(left, g);
    let fr = physical_flux(right, g);
    let ul = left.to_conserved(g.gamma);
    let ur = right.to_conserved(g.gamma);
    let s = wave_speed(left, g).max(wave_speed(right, g));
    Conserved {
        rho: 0.5 * (fl.rho + fr.rho) - 0.5 * s * (ur.rho - ul.rho),
        mom: 0.5 * (fl.mom + fr.mom) - 0.5 * s * (ur.mom - ul.mom),
        en: 0.5 * (fl.en + fr.en) - 0.5 * s * (ur.en - ul.en),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas() -> GasParams {
        GasParams::new(1.4, 1.0, 1).unwrap()
    }

    #[test]
    fn consistency() {
        let g = gas();
        let w = Primitive::new(1.3, -0.4, 2.2);
        assert_eq!(numerical_flux(&w, &w, &g), physical_flux(&w, &g));
        let f = physical_flux(&w, &g);
        let en = 2.2 / 0.4 + 0.5 * 1.3 * 0.16;
        assert!((f.en - (-0.4) * (en + 2.2)).abs() < 1e-14);
    }

    #[test]
    fn mirror_states_carry_no_mass() {
        let g = gas();
        let l = Primitive::new(0.8, -1.5, 0.6);
        let r = Primitive::new(0.8, 1.5, 0.6);
        assert_eq!(numerical_flux(&l, &r, &g).rho, 0.0);
    }

    #[test]
    fn vacuum_has_zero_sound_speed() {
        let g = gas();
        let w = Primitive::new(1.0, 0.5, 0.0);
        assert_eq!(wave_speed(&w, &g), 0.5);
    }

    #[test]
    fn three_cell_update_conserves_mass() {
        // one explicit update of three cells with reflecting-free closed ends:
        // the interior fluxes telescope, so total mass changes only by the end fluxes
        let g = gas();
        let cells = [
            Primitive::new(1.0, 0.3, 1.0),
            Primitive::new(0.2, -0.1, 0.1),
            Primitive::new(0.7, 0.9, 0.4),
        ];
        let f01 = numerical_flux(&cells[0], &cells[1], &g);
        let f12 = numerical_flux(&cells[1], &cells[2], &g);
        let dt_dx = 0.1;
        let before: f64 = cells.iter().map(|c| c.rho).sum();
        let after = (cells[0].rho - dt_dx * f01.rho)
            + (cells[1].rho - dt_dx * (f12.rho - f01.rho))
            + (cells[2].rho + dt_dx * f12.rho);
        assert!((after - before).abs() <= 4.0 * f64::EPSILON * before);
    }
}
