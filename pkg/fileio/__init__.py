# File input/output package
