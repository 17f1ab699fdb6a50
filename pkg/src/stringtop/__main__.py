from stringtop.cli import main

main()
