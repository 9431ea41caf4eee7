"""Chen ranks, resonance and Orlik-Solomon syzygies of hyperplane arrangements."""
