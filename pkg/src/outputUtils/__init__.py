# Table and JSON writers shared by the command-line surface
