# Exceptions package
