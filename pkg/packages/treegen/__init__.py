# TreeSpectra graph construction
