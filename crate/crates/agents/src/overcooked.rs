//! Scripted two-chef Overcooked pair that cooks and serves two full soups.
//!
//! Chef 0 ferries onions into the pot and starts each cook; chef 1 fetches a
//! dish once the pot holds an onion, plates the ready soup and serves it.

use vsarena_core::games::grid::Pos;
use vsarena_core::games::overcooked::{ChefAction, Facing, Item, OvercookedState, Tile, SOUP_ONIONS};
use vsarena_core::{DecisionContext, GameRng, Policy, PolicyError, StateView};

/// Soups the pair aims to deliver.
pub const TARGET_SOUPS: u32 = 2;

/// Floor cell next to `tile` and the direction that faces it.
fn station(s: &OvercookedState, tile: Tile) -> Option<(Pos, Facing)> {
    let at = *s.layout.find(tile).first()?;
    [Facing::Up, Facing::Down, Facing::Left, Facing::Right].into_iter().find_map(|f| {
        // stand on the cell behind `at` as seen along `f`
        let (dx, dy) = f.delta();
        let stand = Pos::new(at.x - dx, at.y - dy);
        s.walkable(stand).then_some((stand, f))
    })
}

/// Walk to the station for `tile`, turn to face it, then interact.
fn use_station(s: &OvercookedState, me: usize, tile: Tile) -> ChefAction {
    let Some((stand, face)) = station(s, tile) else {
        return ChefAction::Stay;
    };
    let chef = s.chefs[me];
    if chef.pos != stand {
        return walk(s, me, stand);
    }
    if chef.facing != face {
        ChefAction::Move(face)
    } else {
        ChefAction::Interact
    }
}

fn walk(s: &OvercookedState, me: usize, to: Pos) -> ChefAction {
    let other = s.chefs[1 - me].pos;
    if other == to {
        return ChefAction::Stay;
    }
    match s.first_step(s.chefs[me].pos, to, Some(other)) {
        Some((_, Some(dir))) => ChefAction::Move(dir),
        _ => ChefAction::Stay,
    }
}

fn soups_in_hand(s: &OvercookedState) -> u32 {
    s.chefs.iter().filter(|c| matches!(c.held, Some(Item::Soup { .. }))).count() as u32
}

/// Soups delivered, carried, or cooking.
fn soups_committed(s: &OvercookedState) -> u32 {
    s.deliveries + soups_in_hand(s) + u32::from(s.pot.cooking.is_some())
}

pub fn onion_chef(s: &OvercookedState) -> ChefAction {
    let me = 0;
    let chef = s.chefs[me];
    let pot = s.pot;
    if soups_committed(s) >= TARGET_SOUPS {
        return match station(s, Tile::OnionSource) {
            Some((stand, _)) if chef.pos != stand => walk(s, me, stand),
            _ => ChefAction::Stay,
        };
    }
    let full = pot.cooking.is_none() && pot.onions >= SOUP_ONIONS;
    match chef.held {
        None if full => use_station(s, me, Tile::Pot),
        None => use_station(s, me, Tile::OnionSource),
        Some(Item::Onion) if pot.cooking.is_none() && pot.onions < SOUP_ONIONS => use_station(s, me, Tile::Pot),
        Some(Item::Onion) => match station(s, Tile::OnionSource) {
            // the pot is busy; keep clear of it
            Some((stand, _)) if chef.pos != stand => walk(s, me, stand),
            _ => ChefAction::Stay,
        },
        Some(_) => ChefAction::Stay,
    }
}

pub fn dish_chef(s: &OvercookedState) -> ChefAction {
    let me = 1;
    let chef = s.chefs[me];
    match chef.held {
        Some(Item::Soup { .. }) => use_station(s, me, Tile::Serve),
        Some(Item::Dish) if s.pot.cooking.is_some() => {
            let act = use_station(s, me, Tile::Pot);
            if act == ChefAction::Interact && !s.pot.is_ready(s.cook_time) {
                ChefAction::Stay
            } else {
                act
            }
        }
        Some(_) => ChefAction::Stay,
        None if s.deliveries + soups_in_hand(s) < TARGET_SOUPS && s.pot.is_active() => {
            use_station(s, me, Tile::DishSource)
        }
        None => ChefAction::Stay,
    }
}

/// Plays chef 0 or chef 1 according to its seat.
#[derive(Clone, Debug, Default)]
pub struct OvercookedOracle;

impl Policy for OvercookedOracle {
    fn name(&self) -> String {
        "oracle".into()
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, _rng: &mut GameRng) -> Result<String, PolicyError> {
        let StateView::Overcooked(s) = ctx.env.view() else {
            return Err(PolicyError::Unsupported(ctx.env.spec().name.clone()));
        };
        let a = if ctx.agent.0 == 0 { onion_chef(s) } else { dish_chef(s) };
        Ok(a.token().to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use vsarena_core::games::overcooked::Layout;

    fn play_out(mut s: OvercookedState) -> OvercookedState {
        while !s.is_terminal() {
            let a = [onion_chef(&s), dish_chef(&s)];
            s.advance(a);
        }
        s
    }

    #[test]
    fn stations_on_the_default_layout() {
        let s = OvercookedState::new(Layout::standard(), 5, 50);
        assert_eq!(station(&s, Tile::Pot), Some((Pos::new(2, 1), Facing::Up)));
        assert_eq!(station(&s, Tile::OnionSource), Some((Pos::new(1, 1), Facing::Left)));
        assert_eq!(station(&s, Tile::DishSource), Some((Pos::new(3, 1), Facing::Right)));
        assert_eq!(station(&s, Tile::Serve), Some((Pos::new(2, 2), Facing::Down)));
    }

    #[test]
    fn pair_delivers_two_soups_in_fifty_steps() {
        let s = play_out(OvercookedState::new(Layout::standard(), 5, 50));
        assert_eq!(s.deliveries, 2);
    }

    #[test]
    fn pair_stops_after_two_soups() {
        let s = play_out(OvercookedState::new(Layout::standard(), 5, 200));
        assert_eq!(s.deliveries, 2);
        assert_eq!(s.pot.onions, 0);
    }
}
