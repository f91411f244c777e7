# TreeSpectra common package
