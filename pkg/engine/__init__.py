# census engine: lattices, cohomology, bounds, surface classes, Hilbert scheme rows
