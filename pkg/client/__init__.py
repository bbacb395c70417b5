# Client package
